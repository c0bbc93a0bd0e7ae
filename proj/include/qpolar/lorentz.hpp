#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "qpolar/group_forms.hpp"
#include "qpolar/linalg_core.hpp"
#include "qpolar/polar_factors.hpp"
#include "qpolar/quat_tensor.hpp"
#include "qpolar/types.hpp"

namespace qpolar {

struct SL2C {
  CMat2 g = CMat2::Identity();
};

struct SL2RPair {
  Mat2 a = Mat2::Identity();
  Mat2 b = Mat2::Identity();
};

inline Mat4 i13_matrix() { return Vec4(1.0, -1.0, -1.0, -1.0).asDiagonal(); }

namespace detail {

inline const std::array<CMat2, 4>& pauli() {
  static const std::array<CMat2, 4> table = [] {
    const Complex i(0.0, 1.0);
    std::array<CMat2, 4> s;
    s[0] = CMat2::Identity();
    s[1] << 0.0, 1.0, 1.0, 0.0;
    s[2] << 0.0, -i, i, 0.0;
    s[3] << 1.0, 0.0, 0.0, -1.0;
    return s;
  }();
  return table;
}

inline Mat4 phi_unchecked(const CMat2& g) {
  const auto& s = pauli();
  const CMat2 gs = g.adjoint();
  Mat4 out;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) out(mu, nu) = 0.5 * (s[mu] * g * s[nu] * gs).trace().real();
  }
  return out;
}

inline CMat2 hermitian(double a, double d, double x, double y) {
  CMat2 h;
  h << Complex(a, 0.0), Complex(x, y), Complex(x, -y), Complex(d, 0.0);
  return h;
}

}  // namespace detail

/// Matrix of the Hermitian map X -> G X G^* in the basis {I, sx, sy, sz}.
inline Mat4 covering_phi(const CMat2& g, double tol = 1e-10) {
  if (std::abs(g.determinant() - Complex(1.0, 0.0)) > tol * detail::scale_of(g.squaredNorm())) {
    throw Error(ErrorCode::NotUnitDeterminant, "covering_phi needs det G = 1");
  }
  return detail::phi_unchecked(g);
}

inline Mat4 covering_phi(const SL2C& g, double tol = 1e-10) { return covering_phi(g.g, tol); }

struct PhiInverse {
  CMat2 h = CMat2::Identity();
  int algorithm_case = 4;  // 1 generic, 2 x = 0, 3 y = 0, 4 x = y = 0
  bool refined = false;
  double residual = 0.0;   // |Phi(H) - P|_F
};

/// Hermitian H = [[a, x + iy], [x - iy, d]] > 0 with det 1 and Phi(H) = P.
/// x and y come from P22 = 1 + 2x^2 and P33 = 1 + 2y^2 (dead zone
/// 1e-9 max(1, |P|)), then (a + d, a - d) from the linear entries of the case;
/// every sign choice is tried and the branch with a, d > 0 and the smallest
/// |Phi(H) - P| wins. A final pass re-reads the parameters from
/// a + d = (2(P11 + 1))^{1/2}, a - d = 2 P14 / (a + d), x = P12 / (a + d),
/// y = -P13 / (a + d) and keeps whichever fits P better.
inline PhiInverse invert_phi_posdef_detail(const Mat4& p, double tol = 1e-9) {
  const FormKind form = FormKind::Minkowski();
  bool positive = false;
  try {
    positive = is_in_group(p, form, tol).member && is_symmetric(p, tol * detail::scale_of(p.norm())) && is_posdef(p);
  } catch (const Error& e) {
    throw Error(ErrorCode::NotPDInGroup, e.what());
  }
  if (!positive) throw Error(ErrorCode::NotPDInGroup, "invert_phi_posdef needs a positive definite element of G_{I13}");

  const auto at = [&p](int i, int j) { return p(i - 1, j - 1); };
  const double zone = 1e-9 * detail::scale_of(p.norm());
  const bool has_x = std::abs(at(2, 2) - 1.0) > zone;
  const bool has_y = std::abs(at(3, 3) - 1.0) > zone;
  const double x0 = has_x ? std::sqrt(std::max(0.0, (at(2, 2) - 1.0) / 2.0)) : 0.0;
  const double y0 = has_y ? std::sqrt(std::max(0.0, (at(3, 3) - 1.0) / 2.0)) : 0.0;

  struct Candidate {
    double a, d, x, y;
  };
  std::vector<Candidate> candidates;
  PhiInverse out;
  for (const double sx : {1.0, -1.0}) {
    for (const double sy : {1.0, -1.0}) {
      const double x = sx * x0;
      const double y = sy * y0;
      double sum = 0.0;
      double diff = 0.0;  // a - d
      if (has_x && has_y) {
        out.algorithm_case = 1;
        sum = -at(1, 3) / y;
        diff = at(2, 4) / x;
      } else if (has_y) {
        out.algorithm_case = 2;
        sum = -at(3, 1) / y;
        diff = -at(3, 4) / y;
      } else if (has_x) {
        out.algorithm_case = 3;
        sum = at(1, 2) / x;
        diff = at(2, 4) / x;
      } else {
        out.algorithm_case = 4;
        sum = sx * std::sqrt(2.0 * (at(1, 1) + 1.0));
        diff = sy * std::sqrt(std::max(0.0, 2.0 * (at(4, 4) - 1.0)));
        candidates.push_back({(sum + diff) / 2.0, (sum - diff) / 2.0, 0.0, 0.0});
        continue;
      }
      candidates.push_back({(sum + diff) / 2.0, (sum - diff) / 2.0, x, y});
    }
  }

  double best = std::numeric_limits<double>::infinity();
  for (const Candidate& c : candidates) {
    if (!(c.a > 0.0 && c.d > 0.0)) continue;
    const CMat2 h = detail::hermitian(c.a, c.d, c.x, c.y);
    const double r = (detail::phi_unchecked(h) - p).norm();
    if (r < best) {
      best = r;
      out.h = h;
    }
  }
  if (!std::isfinite(best)) throw Error(ErrorCode::NoPositiveBranch, "no sign choice gives a > 0 and d > 0");
  out.residual = best;

  const double sum = std::sqrt(2.0 * (at(1, 1) + 1.0));
  const double diff = 2.0 * at(1, 4) / sum;
  const double a = (sum + diff) / 2.0;
  const double d = (sum - diff) / 2.0;
  if (a > 0.0 && d > 0.0) {
    const CMat2 h = detail::hermitian(a, d, at(1, 2) / sum, -at(1, 3) / sum);
    const double r = (detail::phi_unchecked(h) - p).norm();
    if (r < out.residual) {
      out.h = h;
      out.residual = r;
      out.refined = true;
    }
  }
  return out;
}

inline CMat2 invert_phi_posdef(const Mat4& p, double tol = 1e-9) { return invert_phi_posdef_detail(p, tol).h; }

struct LorentzPolar {
  PolarFactors factors;
  Component component = Component::proper_orthochronous;
  Mat4 prefix = Mat4::Identity();  // one of I, -I, I13, -I13
  Mat4 rotation = Mat4::Identity(); // V with X = prefix V P, V = diag(1, R)
  CMat2 preimage = CMat2::Identity();  // G with Phi(G) = P^2
  CMat2 root = CMat2::Identity();      // H = G^{1/2}, Phi(H) = P
};

/// X = Q P in G_{I_{1,3}}. With C the prefix of X's (det, X11) class, Y = C X
/// is in SO+(1,3); G inverts Phi on Y^T Y, P = Phi(G^{1/2}), V = Y P^{-1} with
/// P^{-1} = I13 P I13, and Q = C V.
inline LorentzPolar polar_in_lorentz_detail(const Mat4& x, double tol = kMembershipTol) {
  const FormKind form = FormKind::Minkowski();
  if (!is_in_group(x, form, tol).member) throw Error(ErrorCode::NotInGroup, "polar_in_lorentz input is not in G_{I13}");

  LorentzPolar out;
  const bool proper = x.determinant() > 0.0;
  const bool orthochronous = x(0, 0) > 0.0;
  const Mat4 i13 = i13_matrix();
  if (proper) {
    out.component = orthochronous ? Component::proper_orthochronous : Component::proper_nonorthochronous;
    out.prefix = orthochronous ? Mat4(Mat4::Identity()) : Mat4(-Mat4::Identity());
  } else {
    out.component = orthochronous ? Component::improper_orthochronous : Component::improper_nonorthochronous;
    out.prefix = orthochronous ? i13 : Mat4(-i13);
  }
  const Mat4 y = out.prefix * x;

  Mat4 s = y.transpose() * y;
  s = (0.5 * (s + s.transpose())).eval();
  out.preimage = invert_phi_posdef(s, 1e-9);
  out.root = hermitian_posdef_sqrt_2x2(out.preimage);
  Mat4 p = detail::phi_unchecked(out.root);
  p = (0.5 * (p + p.transpose())).eval();
  out.rotation = y * (i13 * p * i13);

  out.factors.posdef = p;
  out.factors.orthogonal = out.prefix * out.rotation;
  fill_residuals(out.factors, x);
  fill_membership(out.factors, i13);
  return out;
}

inline PolarFactors polar_in_lorentz(const Mat4& x, double tol = kMembershipTol) {
  return polar_in_lorentz_detail(x, tol).factors;
}

/// X = sign [Pi] M_{u(x)u} B, where Pi = 1/2 (1(x)1 - i(x)i - j(x)j - k(x)k)
/// = diag(-1, 1, 1, 1) appears for det X = -1 and B = c(1(x)1) + p(x)i +
/// q(x)j + r(x)k is the boost Phi(H), H = [[a, x + iy], [x - iy, d]].
struct LorentzRep {
  int case_tag = 1;  // 1: det 1, X11 > 0; 2: det 1, X11 < 0; 3: det -1, X11 > 0; 4: det -1, X11 < 0
  int sign = 1;
  bool prefix = false;
  Quaternion u{1.0, 0.0, 0.0, 0.0};
  double a = 1.0, d = 1.0, x = 0.0, y = 0.0;
  QuatTensorRep boost;

  static QuatTensorRep prefix_rep() {
    QuatTensorRep rep;
    rep.c = 0.5;
    rep.p = Vec3(-0.5, 0.0, 0.0);
    rep.q = Vec3(0.0, -0.5, 0.0);
    rep.r = Vec3(0.0, 0.0, -0.5);
    return rep;
  }

  Mat4 reconstruct() const {
    Mat4 m = matrix_of_product_tensor(u, u) * boost.reconstruct();
    if (prefix) m = prefix_rep().reconstruct() * m;
    return sign * m;
  }
};

inline QuatTensorRep boost_rep(double a, double d, double x, double y) {
  QuatTensorRep rep;
  rep.c = (a + d) * (a + d) / 4.0;
  rep.p = Vec3(x * x, (a * a - d * d - 4.0 * x * y) / 4.0, ((a - d) * x + (a + d) * y) / 2.0);
  rep.q = Vec3((d * d - a * a - 4.0 * x * y) / 4.0, y * y, ((a + d) * x + (d - a) * y) / 2.0);
  rep.r = Vec3(((a - d) * x - (a + d) * y) / 2.0, (y * (d - a) - (a + d) * x) / 2.0, (a - d) * (a - d) / 4.0);
  return rep;
}

inline LorentzRep rep_lorentz(const Mat4& x, double tol = kMembershipTol) {
  const LorentzPolar polar = polar_in_lorentz_detail(x, tol);
  LorentzRep out;
  switch (polar.component) {
    case Component::proper_orthochronous: out.case_tag = 1; break;
    case Component::proper_nonorthochronous: out.case_tag = 2; out.sign = -1; break;
    case Component::improper_orthochronous: out.case_tag = 3; out.sign = -1; out.prefix = true; break;
    default: out.case_tag = 4; out.prefix = true; break;
  }
  out.u = rotation_to_unit_pair(polar.rotation, 1e-8).u;
  out.a = polar.root(0, 0).real();
  out.d = polar.root(1, 1).real();
  out.x = polar.root(0, 1).real();
  out.y = polar.root(0, 1).imag();
  out.boost = boost_rep(out.a, out.d, out.x, out.y);
  return out;
}

/// SL(2,R) x SL(2,R) -> SO+(2,2): conjugation by the concentric embedding
/// C = [[x1, 0, 0, x2], [0, x3, x4, 0], [0, x5, x6, 0], [x7, 0, 0, x8]] of
/// A = [[x1, x2], [x7, x8]] and B = [[x3, x4], [x5, x6]], in the basis
/// {sz (x) sx, sx (x) I, sz (x) i sy, i sy (x) I}.
inline Mat4 so22_cover_phi(const SL2RPair& pair, double tol = 1e-10) {
  if (std::abs(pair.a.determinant() - 1.0) > tol * detail::scale_of(pair.a.squaredNorm()) ||
      std::abs(pair.b.determinant() - 1.0) > tol * detail::scale_of(pair.b.squaredNorm())) {
    throw Error(ErrorCode::NotUnitDeterminant, "so22_cover_phi needs det A = det B = 1");
  }
  Mat4 c = Mat4::Zero();
  c(0, 0) = pair.a(0, 0);
  c(0, 3) = pair.a(0, 1);
  c(3, 0) = pair.a(1, 0);
  c(3, 3) = pair.a(1, 1);
  c.block<2, 2>(1, 1) = pair.b;

  Mat2 sx, sz, isy;
  sx << 0.0, 1.0, 1.0, 0.0;
  sz << 1.0, 0.0, 0.0, -1.0;
  isy << 0.0, 1.0, -1.0, 0.0;
  const Mat2 id = Mat2::Identity();
  const auto kron = [](const Mat2& l, const Mat2& r) {
    Mat4 k;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = l(i, j) * r;
    }
    return k;
  };
  const std::array<Mat4, 4> basis{kron(sz, sx), kron(sx, id), kron(sz, isy), kron(isy, id)};

  const Mat4 c_inv = c.inverse();
  Mat4 out;
  for (int nu = 0; nu < 4; ++nu) {
    const Mat4 image = c * basis[nu] * c_inv;
    for (int mu = 0; mu < 4; ++mu) out(mu, nu) = 0.25 * basis[mu].cwiseProduct(image).sum();
  }
  return out;
}

}  // namespace qpolar
