#pragma once

#include <cmath>

#include "qpolar/group_forms.hpp"
#include "qpolar/linalg_core.hpp"
#include "qpolar/oracle.hpp"
#include "qpolar/polar_factors.hpp"
#include "qpolar/quat_tensor.hpp"
#include "qpolar/types.hpp"

namespace qpolar {

enum class ThetaBranch { U, V };

struct ThetaSolution {
  double theta = 0.0;
  ThetaBranch branch = ThetaBranch::U;
  double residual = 0.0;  // |sqrt(2) E G R_theta - B|_F
};

/// Solves sqrt(2) E G R_theta = B for R_theta = U_theta (det B > 0) or
/// V_theta (det B < 0); both are tried when det B vanishes. Each branch is a
/// one-parameter Procrustes problem: with N = (sqrt(2) E G)^T B, the best
/// U_theta has theta = atan2(N21 - N12, N11 + N22) and the best V_theta has
/// theta = atan2(N12 + N21, N11 - N22).
inline ThetaSolution theta_solve(const Mat2& g, const Mat2& e, const Mat2& b, double tol = 1e-8) {
  const Mat2 k = std::sqrt(2.0) * e * g;
  const Mat2 n = k.transpose() * b;
  const double scale = detail::scale_of(b.norm());

  ThetaSolution u;
  u.branch = ThetaBranch::U;
  u.theta = std::atan2(n(1, 0) - n(0, 1), n(0, 0) + n(1, 1));
  u.residual = (k * rotation_U(u.theta) - b).norm();

  ThetaSolution v;
  v.branch = ThetaBranch::V;
  v.theta = std::atan2(n(0, 1) + n(1, 0), n(0, 0) - n(1, 1));
  v.residual = (k * reflection_V(v.theta) - b).norm();

  const double det = b.determinant();
  const double dead_zone = 1e-12 * scale * scale;
  ThetaSolution best;
  if (det > dead_zone) {
    best = u;
  } else if (det < -dead_zone) {
    best = v;
  } else {
    best = v.residual < u.residual && u.residual > tol * scale ? v : u;
  }
  if (best.residual > tol * scale) {
    throw Error(ErrorCode::NoSolution, "no rotation or reflection solves sqrt(2) E G R = B");
  }
  return best;
}

/// Intermediate blocks of the G_{I_{2,2}} construction, exposed for checks.
struct G22PolarDetail {
  PolarFactors factors;
  Mat2 a, b, d;  // blocks of X^T X
  Mat2 g;        // lower Cholesky factor of A - I
  Mat2 e, f, h;  // blocks of P
};

/// Eigen-free polar decomposition X = Q P in G_{I_{2,2}}.
/// With X^T X = [[A, B], [B^T, D]] and P = [[E, F], [F^T, H]]:
/// A - I = G G^T, E = (I + G G^T / 2)^{1/2}, 2 E F = B, H = (I + F^T F)^{1/2},
/// and Q = X P^{-1} with P^{-1} = I22 P I22.
inline G22PolarDetail polar_in_G22_detail(const Mat4& x, double tol = kMembershipTol) {
  const FormKind form = FormKind::Ipq(2, 2);
  if (!is_in_group(x, form, tol).member) throw Error(ErrorCode::NotInGroup, "polar_in_G22 input is not in G_{I22}");

  G22PolarDetail out;
  Mat4 s = x.transpose() * x;
  s = (0.5 * (s + s.transpose())).eval();
  out.a = s.topLeftCorner<2, 2>();
  out.b = s.topRightCorner<2, 2>();
  out.d = s.bottomRightCorner<2, 2>();

  const double scale = detail::scale_of(out.a.norm());
  out.g = cholesky_lower_2x2(out.a - Mat2::Identity(), 1e-9);
  out.e = posdef_sqrt_2x2(Mat2::Identity() + 0.5 * out.g * out.g.transpose());
  out.f = 0.5 * out.e.inverse() * out.b;
  if ((out.f * out.f.transpose() - 0.5 * out.g * out.g.transpose()).norm() > 1e-8 * scale) {
    throw Error(ErrorCode::InternalConsistency, "F F^T deviates from (A - I) / 2");
  }
  out.h = posdef_sqrt_2x2(Mat2::Identity() + out.f.transpose() * out.f);

  Mat4 p;
  p << out.e, out.f, out.f.transpose(), out.h;
  const Mat4 i22 = form_matrix(form);
  out.factors.posdef = p;
  out.factors.orthogonal = x * (i22 * p * i22);
  fill_residuals(out.factors, x);
  fill_membership(out.factors, i22);
  return out;
}

inline PolarFactors polar_in_G22(const Mat4& x, double tol = kMembershipTol) {
  return polar_in_G22_detail(x, tol).factors;
}

/// Polar decomposition in any of the sixteen G_{M_{e(x)f}} by orthogonal
/// similarity to G_{I4}, G_{I22} or G_{J4}: if Y = S^T X S = Q P there, then
/// X = (S Q S^T)(S P S^T).
inline PolarFactors polar_in_basis_form(const Mat4& x, BasisIndex idx, double tol = kMembershipTol) {
  const FormKind form = FormKind::Basis(idx);
  if (!is_in_group(x, form, tol).member) {
    throw Error(ErrorCode::NotInGroup, "input is not in G_M for M = " + form.name());
  }
  const Similarity sim = similarity_to_canonical(idx);
  const Mat4 y = sim.s.transpose() * x * sim.s;

  PolarFactors inner;
  switch (sim.canonical) {
    case CanonicalForm::I4:
      inner.orthogonal = y;
      inner.posdef = Mat4::Identity();
      break;
    case CanonicalForm::I22:
      inner = polar_in_G22(y, tol);
      break;
    case CanonicalForm::J4:
      // No closed form here for the symplectic factor; the Newton oracle
      // stands in and membership is verified below.
      inner = oracle::newton_polar(y);
      break;
  }

  PolarFactors out;
  out.orthogonal = sim.s * inner.orthogonal * sim.s.transpose();
  const Mat4 p = sim.s * inner.posdef * sim.s.transpose();
  out.posdef = 0.5 * (p + p.transpose());
  out.iterations = inner.iterations;
  fill_residuals(out, x);
  fill_membership(out, basis_matrix(idx));
  return out;
}

}  // namespace qpolar
