#pragma once

#include <array>
#include <cmath>

#include "qpolar/group_forms.hpp"
#include "qpolar/linalg_core.hpp"
#include "qpolar/polar.hpp"
#include "qpolar/quat_tensor.hpp"
#include "qpolar/types.hpp"

namespace qpolar {

inline Mat4 i31_matrix() { return Vec4(1.0, 1.0, 1.0, -1.0).asDiagonal(); }

/// c(1(x)1) + p(x)i + q(x)j + r(x)k for a positive definite P in G_{I_{2,2}},
/// read off the NE block [[b11, b12], [b21, b22]] of P through the square root
/// formulas for E = (I + B B^T)^{1/2} and H = (I + B^T B)^{1/2}.
inline QuatTensorRep rep_posdef_g22(const Mat4& p) {
  bool positive = false;
  try {
    positive = is_posdef_in_group(p, FormKind::Ipq(2, 2));
  } catch (const Error& e) {
    throw Error(ErrorCode::NotPDInGroup, e.what());
  }
  if (!positive) throw Error(ErrorCode::NotPDInGroup, "rep_posdef_g22 input is not positive definite");

  const double b11 = p(0, 2), b12 = p(0, 3), b21 = p(1, 2), b22 = p(1, 3);

  // E = (I + B B^T)^{1/2}
  const double n1 = 1.0 + b11 * b11 + b12 * b12;
  const double n2 = 1.0 + b21 * b21 + b22 * b22;
  const double m1 = b11 * b21 + b12 * b22;
  const double alpha1 = std::sqrt(n1);
  const double beta1 = m1 / alpha1;
  const double gamma1 = std::sqrt(n1 * n2 - m1 * m1) / alpha1;
  const double theta1 = std::atan2(beta1, alpha1 + gamma1);

  // H = (I + B^T B)^{1/2}
  const double k1 = 1.0 + b11 * b11 + b21 * b21;
  const double k2 = 1.0 + b12 * b12 + b22 * b22;
  const double l1 = b11 * b12 + b21 * b22;
  const double alpha2 = std::sqrt(k1);
  const double beta2 = l1 / alpha2;
  const double gamma2 = std::sqrt(k1 * k2 - l1 * l1) / alpha2;
  const double theta2 = std::atan2(beta2, alpha2 + gamma2);

  const double c1 = std::cos(theta1), s1 = std::sin(theta1);
  const double c2 = std::cos(theta2), s2 = std::sin(theta2);
  const double e_plus = alpha1 * c1 + beta1 * s1 + gamma1 * c1;
  const double e_minus = alpha1 * c1 - beta1 * s1 - gamma1 * c1;
  const double h_plus = alpha2 * c2 + beta2 * s2 + gamma2 * c2;
  const double h_minus = alpha2 * c2 - beta2 * s2 - gamma2 * c2;

  QuatTensorRep rep;
  rep.c = (e_plus + h_plus) / 4.0;
  rep.p = Vec3((e_plus - h_plus) / 4.0, (b12 + b21) / 2.0, (b22 - b11) / 2.0);
  rep.q = Vec3((b21 - b12) / 2.0, (e_minus + h_minus) / 4.0, (alpha2 * s2 + alpha1 * s1) / 2.0);
  rep.r = Vec3((b11 + b22) / 2.0, (alpha2 * s2 - alpha1 * s1) / 2.0, (e_minus - h_minus) / 4.0);
  return rep;
}

/// Q = [prefix] M_{u(x)v}. Case 1: u, v in span{1, i} (identity component).
/// Case 2: u, v in span{j, k} (det 1, both blocks of determinant -1).
/// Case 3: det -1, Q = I_{3,1} M_{u(x)v} with the pair of case 1 or 2.
struct OrthogonalG22Rep {
  int case_tag = 1;
  int pair_case = 1;
  bool prefix = false;
  Quaternion u{1.0, 0.0, 0.0, 0.0};
  Quaternion v{1.0, 0.0, 0.0, 0.0};

  /// 1/2 (1(x)1 + i(x)i + j(x)j - k(x)k), the representation of I_{3,1}.
  static QuatTensorRep prefix_rep() {
    QuatTensorRep rep;
    rep.c = 0.5;
    rep.p = Vec3(0.5, 0.0, 0.0);
    rep.q = Vec3(0.0, 0.5, 0.0);
    rep.r = Vec3(0.0, 0.0, -0.5);
    return rep;
  }

  Mat4 pair_matrix() const { return matrix_of_product_tensor(u, v); }

  Mat4 reconstruct() const {
    const Mat4 m = pair_matrix();
    return prefix ? Mat4(prefix_rep().reconstruct() * m) : m;
  }
};

namespace detail {

/// Keeps the components of q in the plane spanned by the two units and
/// renormalizes.
inline Quaternion project_to_plane(const Quaternion& q, bool real_plane) {
  Quaternion out = real_plane ? Quaternion{q.w, q.x, 0.0, 0.0} : Quaternion{0.0, 0.0, q.y, q.z};
  const double n = out.norm();
  return {out.w / n, out.x / n, out.y / n, out.z / n};
}

}  // namespace detail

inline OrthogonalG22Rep rep_orthogonal_g22(const Mat4& q, double tol = kMembershipTol) {
  if ((q.transpose() * q - Mat4::Identity()).norm() > tol * 4.0 || !is_in_group(q, FormKind::Ipq(2, 2), tol).member) {
    throw Error(ErrorCode::NotOrthogonalInGroup, "rep_orthogonal_g22 input is not in G_{I22} cap O(4)");
  }
  OrthogonalG22Rep out;
  Mat4 z = q;
  if (q.determinant() < 0.0) {
    out.prefix = true;
    z = i31_matrix() * q;
  }
  const UnitPair pair = rotation_to_unit_pair(z, 1e-8);
  const double real_weight = pair.u.w * pair.u.w + pair.u.x * pair.u.x;
  const bool real_plane = real_weight >= 0.5;
  out.pair_case = real_plane ? 1 : 2;
  out.u = detail::project_to_plane(pair.u, real_plane);
  out.v = detail::project_to_plane(pair.v, real_plane);
  out.case_tag = out.prefix ? 3 : out.pair_case;
  return out;
}

struct G22Rep {
  OrthogonalG22Rep orthogonal;
  QuatTensorRep posdef;
  double residual_reconstruction = 0.0;

  Mat4 reconstruct() const { return orthogonal.reconstruct() * posdef.reconstruct(); }
};

inline G22Rep rep_g22(const Mat4& x, double tol = kMembershipTol) {
  const PolarFactors f = polar_in_G22(x, tol);
  G22Rep out;
  out.orthogonal = rep_orthogonal_g22(f.orthogonal, 1e-9);
  out.posdef = rep_posdef_g22(f.posdef);
  out.residual_reconstruction = (out.reconstruct() - x).norm();
  return out;
}

namespace detail {

inline void require_symmetric_rep(const QuatTensorRep& rep) {
  const double scale = scale_of(std::abs(rep.c) + rep.p.norm() + rep.q.norm() + rep.r.norm());
  if (rep.has_antisymmetric_part(1e-10 * scale)) {
    throw Error(ErrorCode::NotSymmetricRep, "representation has s or t components");
  }
}

}  // namespace detail

/// Residuals of the quadratic system satisfied by the representation
/// a(1(x)1) + p(x)i + q(x)j + r(x)k of a symmetric element of G_{I_{2,2}}:
/// (One) a p1 = (r x q)1, (J) a(r x i) + q1 p + p1 q = (p.q) i,
/// (K) a(i x q) + r1 p + p1 r = (p.r) i,
/// (IOne) a^2 - |p|^2 + |q|^2 + |r|^2 + 2p1^2 - 2q1^2 - 2r1^2 = 1,
/// (ITwo) p1 p^ = q1 q^ + r1 r^ where ^ drops the i component.
inline std::array<double, 5> check_fpi_equations(const QuatTensorRep& rep) {
  detail::require_symmetric_rep(rep);
  const double a = rep.c;
  const Vec3& p = rep.p;
  const Vec3& q = rep.q;
  const Vec3& r = rep.r;
  const Vec3 i = Vec3::UnitX();
  const double one = a * p(0) - r.cross(q)(0);
  const Vec3 j = a * r.cross(i) + q(0) * p + p(0) * q - p.dot(q) * i;
  const Vec3 k = a * i.cross(q) + r(0) * p + p(0) * r - p.dot(r) * i;
  const double i_one = a * a - p.squaredNorm() + q.squaredNorm() + r.squaredNorm() + 2.0 * p(0) * p(0) -
                       2.0 * q(0) * q(0) - 2.0 * r(0) * r(0) - 1.0;
  const Vec3 i_two = p(0) * p - q(0) * q - r(0) * r;
  return {std::abs(one), j.norm(), k.norm(), std::abs(i_one), i_two.tail<2>().norm()};
}

struct SymplecticCheck {
  std::array<double, 4> residuals{};  // |aq - r x p|, |p.q|, |r.q|, |a^2 - p.p + q.q - r.r - 1|
  bool positive = false;              // a > 0 and 2a^2 - 2 q.q + 1 > 0
};

/// Symmetric elements of Sp(4) = G_{M_{1(x)j}}.
inline SymplecticCheck check_symplectic_symmetric(const QuatTensorRep& rep) {
  detail::require_symmetric_rep(rep);
  const double a = rep.c;
  const Vec3& p = rep.p;
  const Vec3& q = rep.q;
  const Vec3& r = rep.r;
  SymplecticCheck out;
  out.residuals = {(a * q - r.cross(p)).norm(), std::abs(p.dot(q)), std::abs(r.dot(q)),
                   std::abs(a * a - p.dot(p) + q.dot(q) - r.dot(r) - 1.0)};
  out.positive = a > 0.0 && 2.0 * a * a - 2.0 * q.dot(q) + 1.0 > 0.0;
  return out;
}

}  // namespace qpolar
