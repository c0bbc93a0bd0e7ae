#pragma once

#include <cmath>
#include <optional>

#include "qpolar/group_forms.hpp"
#include "qpolar/linalg_core.hpp"
#include "qpolar/types.hpp"

namespace qpolar {

namespace detail {

inline MatX assemble_blocks(const MatX& a, const MatX& b, const MatX& d) {
  MatX x(a.rows() + d.rows(), a.cols() + d.cols());
  x << a, b, b.transpose(), d;
  return x;
}

inline MatX checked_twist(const std::optional<MatX>& twist, Eigen::Index n) {
  if (!twist) return MatX::Identity(n, n);
  if (twist->rows() != n || twist->cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "root twist must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if ((twist->transpose() * *twist - MatX::Identity(n, n)).norm() > 1e-10 * static_cast<double>(n)) {
    throw Error(ErrorCode::NotSpecialOrthogonal, "root twist must be orthogonal");
  }
  return *twist;
}

/// Lower Cholesky factor of Y^2 - I for Y > 0 with Y^2 - I >= 0.
inline MatX hyperbolic_root(const MatX& y, const char* which) {
  if (y.rows() != y.cols()) throw Error(ErrorCode::DimensionMismatch, std::string(which) + " must be square");
  if (!is_symmetric(y, kMembershipTol) || !is_posdef(y)) {
    throw Error(ErrorCode::NotPD, std::string(which) + " is not symmetric positive definite");
  }
  const MatX ys = 0.5 * (y + y.transpose());
  MatX s = ys * ys - MatX::Identity(y.rows(), y.cols());
  s = (0.5 * (s + s.transpose())).eval();
  if (!is_psd(s, kMembershipTol)) {
    throw Error(ErrorCode::HyperbolicConstraintViolated, std::string(which) + "^2 - I is not positive semidefinite");
  }
  return cholesky_lower_psd(s, kMembershipTol);
}

}  // namespace detail

/// Positive definite X = [[A, B], [B^T, D]] in G_{I_{n,n}} with prescribed A.
/// B is (lower Cholesky factor of A^2 - I) * twist, D = (I + B^T B)^{1/2}.
inline MatX complete_given_A(const MatX& a, const std::optional<MatX>& twist = std::nullopt) {
  const MatX l = detail::hyperbolic_root(a, "A");
  const MatX b = l * detail::checked_twist(twist, a.rows());
  const MatX d = posdef_sqrt(MatX::Identity(b.cols(), b.cols()) + b.transpose() * b);
  return detail::assemble_blocks(0.5 * (a + a.transpose()), b, d);
}

/// Mirror image of complete_given_A: B = twist * L^T with L L^T = D^2 - I.
inline MatX complete_given_D(const MatX& d, const std::optional<MatX>& twist = std::nullopt) {
  const MatX l = detail::hyperbolic_root(d, "D");
  const MatX b = detail::checked_twist(twist, d.rows()) * l.transpose();
  const MatX a = posdef_sqrt(MatX::Identity(b.rows(), b.rows()) + b * b.transpose());
  return detail::assemble_blocks(a, b, 0.5 * (d + d.transpose()));
}

/// Any real B: A = (I + B B^T)^{1/2}, D = (I + B^T B)^{1/2}.
inline MatX complete_given_B(const MatX& b) {
  const MatX a = posdef_sqrt(MatX::Identity(b.rows(), b.rows()) + b * b.transpose());
  const MatX d = posdef_sqrt(MatX::Identity(b.cols(), b.cols()) + b.transpose() * b);
  return detail::assemble_blocks(a, b, d);
}

/// Logarithm of a positive definite P in G_{I_{n,n}}: L = [[0, Y], [Y^T, 0]]
/// with Y = U diag(asinh(sigma)) V^T, where U diag(sigma) V^T is the SVD of
/// the NE block of P. exp(L) has NE block U diag(sinh y) V^T = B.
inline MatX log_posdef_Gnn(const MatX& p) {
  if (p.rows() != p.cols() || p.rows() % 2 != 0) {
    throw Error(ErrorCode::DimensionMismatch, "log_posdef_Gnn needs a 2n x 2n matrix");
  }
  const auto n = p.rows() / 2;
  const FormKind form = FormKind::Ipq(static_cast<int>(n), static_cast<int>(n));
  bool positive = false;
  try {
    positive = is_posdef_in_group(p, form);
  } catch (const Error& e) {
    throw Error(ErrorCode::NotPDInGroup, e.what());
  }
  if (!positive) throw Error(ErrorCode::NotPDInGroup, "diagonal blocks are not positive definite");

  const SvdX s = svd(p.topRightCorner(n, n));
  const Eigen::VectorXd y = s.sigma.unaryExpr([](double v) { return std::asinh(v); });
  const MatX block = s.u * y.asDiagonal() * s.v.transpose();
  MatX l = MatX::Zero(2 * n, 2 * n);
  l.topRightCorner(n, n) = block;
  l.bottomLeftCorner(n, n) = block.transpose();
  return l;
}

}  // namespace qpolar
