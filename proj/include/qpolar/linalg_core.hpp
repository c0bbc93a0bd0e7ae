#pragma once

#include <cmath>

#include "qpolar/types.hpp"

namespace qpolar {

/// Relative tolerance used by the Sylvester positivity test.
inline constexpr double kPositivityEps = 1e-10;

inline Mat2 rotation_U(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat2 u;
  u << c, -s, s, c;
  return u;
}

inline Mat2 reflection_V(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat2 v;
  v << c, s, s, -c;
  return v;
}

inline bool is_symmetric(const MatX& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).norm() <= tol * detail::scale_of(m.norm());
}

/// Sylvester criterion for a symmetric 2x2 matrix: a11 > eps and det > eps,
/// eps = kPositivityEps * max(1, |Y|).
inline bool is_posdef_2x2(const Mat2& y) {
  const double eps = kPositivityEps * detail::scale_of(y.norm());
  return y(0, 0) > eps && y.determinant() > eps;
}

/// Lower triangular L with nonnegative diagonal and L L^T = S for symmetric
/// positive semidefinite S. A vanishing pivot yields a zero column.
inline Mat2 cholesky_lower_2x2(const Mat2& s, double tol = 1e-10) {
  const double scale = detail::scale_of(s.norm());
  if (std::abs(s(0, 1) - s(1, 0)) > tol * scale) {
    throw Error(ErrorCode::NotSymmetric, "cholesky_lower_2x2 input is not symmetric");
  }
  const double floor = tol * scale;
  const double s11 = s(0, 0);
  const double s12 = 0.5 * (s(0, 1) + s(1, 0));
  const double s22 = s(1, 1);
  if (s11 < -floor || s22 < -floor || s11 * s22 - s12 * s12 < -floor * scale) {
    throw Error(ErrorCode::NotPSD, "cholesky_lower_2x2 input has a negative leading minor");
  }
  Mat2 l = Mat2::Zero();
  if (s11 > floor) {
    l(0, 0) = std::sqrt(s11);
    l(1, 0) = s12 / l(0, 0);
    l(1, 1) = std::sqrt(std::max(0.0, s22 - l(1, 0) * l(1, 0)));
  } else {
    if (s12 * s12 > (std::max(s11, 0.0) + floor) * (std::max(s22, 0.0) + floor)) {
      throw Error(ErrorCode::NotPSD, "cholesky_lower_2x2 zero pivot with nonzero coupling");
    }
    l(1, 1) = std::sqrt(std::max(0.0, s22));
  }
  return l;
}

/// Unique symmetric positive definite square root of a 2x2 positive definite
/// matrix, computed from the upper Cholesky factor [[alpha, beta], [0, gamma]]
/// rotated by U_theta with tan(theta) = beta / (alpha + gamma).
inline Mat2 posdef_sqrt_2x2(const Mat2& y) {
  if (std::abs(y(0, 1) - y(1, 0)) > kPositivityEps * detail::scale_of(y.norm())) {
    throw Error(ErrorCode::NotPD, "posdef_sqrt_2x2 input is not symmetric");
  }
  Mat2 ys = y;
  ys(0, 1) = ys(1, 0) = 0.5 * (y(0, 1) + y(1, 0));
  if (!is_posdef_2x2(ys)) {
    throw Error(ErrorCode::NotPD, "posdef_sqrt_2x2 input fails the Sylvester test");
  }
  const double alpha = std::sqrt(ys(0, 0));
  const double beta = ys(0, 1) / alpha;
  const double gamma = std::sqrt(ys.determinant() / ys(0, 0));
  // alpha + gamma > 0, so atan2 lands in the first quadrant for beta > 0 and
  // the fourth for beta < 0.
  const double theta = std::atan2(beta, alpha + gamma);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat2 x;
  x(0, 0) = alpha * c;
  x(0, 1) = x(1, 0) = alpha * s;
  x(1, 1) = beta * s + gamma * c;
  return x;
}

struct Svd2 {
  Mat2 u;
  Eigen::Vector2d sigma;  // descending, nonnegative
  Mat2 v;
};

/// Closed-form 2x2 singular value decomposition B = U diag(sigma) V^T.
/// U and V are rotations whenever det(B) >= 0; otherwise U is a reflection.
inline Svd2 svd_2x2(const Mat2& b) {
  const double e = 0.5 * (b(0, 0) + b(1, 1));
  const double f = 0.5 * (b(0, 0) - b(1, 1));
  const double g = 0.5 * (b(1, 0) + b(0, 1));
  const double h = 0.5 * (b(1, 0) - b(0, 1));
  const double q = std::hypot(e, h);
  const double r = std::hypot(f, g);
  const double a1 = std::atan2(g, f);
  const double a2 = std::atan2(h, e);
  const double theta = 0.5 * (a2 - a1);
  const double phi = 0.5 * (a2 + a1);

  Svd2 out;
  out.u = rotation_U(phi);
  out.v = rotation_U(theta).transpose();
  out.sigma << q + r, q - r;
  if (out.sigma(1) < 0.0) {
    out.sigma(1) = -out.sigma(1);
    out.u.col(1) = -out.u.col(1);
  }
  return out;
}

/// H = (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M)) for Hermitian positive
/// definite 2x2 M.
inline CMat2 hermitian_posdef_sqrt_2x2(const CMat2& m, double tol = 1e-10) {
  const double scale = detail::scale_of(m.norm());
  if ((m - m.adjoint()).norm() > tol * scale) {
    throw Error(ErrorCode::NotPD, "hermitian_posdef_sqrt_2x2 input is not Hermitian");
  }
  const Complex det = m.determinant();
  const double trace = m.trace().real();
  if (std::abs(det.imag()) > tol * scale * scale || det.real() <= 0.0 || trace <= 0.0) {
    throw Error(ErrorCode::NotPD, "hermitian_posdef_sqrt_2x2 input is not positive definite");
  }
  const double root_det = std::sqrt(det.real());
  CMat2 h = m + root_det * CMat2::Identity();
  h /= std::sqrt(trace + 2.0 * root_det);
  return h;
}

// ---------------------------------------------------------------------------
// Dimension-generic helpers. The 2x2 case always routes to the closed forms
// above; larger sizes use Eigen's dense solvers.

inline bool is_posdef(const MatX& y) {
  if (y.rows() == 2 && y.cols() == 2) return is_posdef_2x2(Mat2(y));
  // Leading principal minors are the running products of the Cholesky pivots.
  const double eps = kPositivityEps * detail::scale_of(y.norm());
  Eigen::LLT<MatX> llt(0.5 * (y + y.transpose()));
  if (llt.info() != Eigen::Success) return false;
  const MatX l = llt.matrixL();
  return (l.diagonal().array().square() > eps).all();
}

inline bool is_psd(const MatX& y, double tol) {
  const double floor = tol * detail::scale_of(y.norm());
  if (y.rows() == 2 && y.cols() == 2) {
    const Mat2 s = 0.5 * (Mat2(y) + Mat2(y).transpose());
    return s(0, 0) >= -floor && s(1, 1) >= -floor && s.determinant() >= -floor * detail::scale_of(s.norm());
  }
  Eigen::SelfAdjointEigenSolver<MatX> es(0.5 * (y + y.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -floor;
}

/// Lower Cholesky factor of a positive semidefinite matrix; zero pivots give
/// zero columns.
inline MatX cholesky_lower_psd(const MatX& s, double tol = 1e-10) {
  if (s.rows() == 2 && s.cols() == 2) return cholesky_lower_2x2(Mat2(s), tol);
  if (!is_symmetric(s, tol)) {
    throw Error(ErrorCode::NotSymmetric, "cholesky_lower_psd input is not symmetric");
  }
  const Eigen::Index n = s.rows();
  const double floor = tol * detail::scale_of(s.norm());
  MatX l = MatX::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = s(j, j) - l.row(j).head(j).squaredNorm();
    if (pivot < -floor) throw Error(ErrorCode::NotPSD, "cholesky_lower_psd negative pivot");
    if (pivot <= floor) continue;
    l(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      l(i, j) = (s(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
    }
  }
  if ((l * l.transpose() - s).norm() > std::sqrt(tol) * detail::scale_of(s.norm())) {
    throw Error(ErrorCode::NotPSD, "cholesky_lower_psd input is not positive semidefinite");
  }
  return l;
}

inline MatX posdef_sqrt(const MatX& y) {
  if (y.rows() == 2 && y.cols() == 2) return posdef_sqrt_2x2(Mat2(y));
  if (!is_posdef(y)) throw Error(ErrorCode::NotPD, "posdef_sqrt input is not positive definite");
  Eigen::SelfAdjointEigenSolver<MatX> es(0.5 * (y + y.transpose()));
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

struct SvdX {
  MatX u;
  Eigen::VectorXd sigma;
  MatX v;
};

inline SvdX svd(const MatX& b) {
  if (b.rows() == 2 && b.cols() == 2) {
    const Svd2 s = svd_2x2(Mat2(b));
    return {s.u, s.sigma, s.v};
  }
  Eigen::JacobiSVD<MatX> js(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {js.matrixU(), js.singularValues(), js.matrixV()};
}

}  // namespace qpolar
