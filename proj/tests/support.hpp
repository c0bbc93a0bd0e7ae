#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

#include "qpolar/qpolar.hpp"

namespace qpolar::testing {

inline Mat2 random_spd2(oracle::Rng& rng, double spread = 2.0) {
  Mat2 l;
  l << rng.uniform(0.1, spread), 0.0, rng.uniform(-spread, spread), rng.uniform(0.1, spread);
  return l * l.transpose();
}

inline Mat2 random_mat2(oracle::Rng& rng, double lo, double hi) {
  Mat2 m;
  m << rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi);
  return m;
}

/// Random element of SL(2, C) with entries of moderate size.
inline CMat2 random_sl2c(oracle::Rng& rng) {
  for (;;) {
    CMat2 g;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) g(i, j) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    }
    const Complex det = g.determinant();
    if (std::abs(det) < 0.2) continue;
    return g / std::sqrt(det);
  }
}

/// Hermitian positive definite [[a, x + iy], [x - iy, d]] with det 1.
inline CMat2 hermitian_sl2c(double a, double x, double y) {
  const double d = (1.0 + x * x + y * y) / a;
  CMat2 h;
  h << Complex(a, 0.0), Complex(x, y), Complex(x, -y), Complex(d, 0.0);
  return h;
}

/// Random element of SL(2, R) with det 1.
inline Mat2 random_sl2r(oracle::Rng& rng) {
  for (;;) {
    Mat2 m = random_mat2(rng, -1.5, 1.5);
    const double det = m.determinant();
    if (std::abs(det) < 0.2) continue;
    if (det < 0.0) m.col(0) *= -1.0;
    return m / std::sqrt(std::abs(det));
  }
}

inline Mat2 random_spd_sl2r(oracle::Rng& rng) {
  const Mat2 y = random_spd2(rng, 1.5);
  return y / std::sqrt(y.determinant());
}

/// Symmetric involutions in each group; T S T^T is a symmetric group element
/// with the inertia of S for every T in the group.
inline std::array<Mat4, 4> symmetric_involutions(const FormKind& form) {
  const auto d = [](double a, double b, double c, double e) { return Mat4(Vec4(a, b, c, e).asDiagonal()); };
  const Mat4 id = Mat4::Identity();
  switch (form.tag) {
    case FormKind::Tag::Ipq: return {id, d(1, -1, 1, -1), d(-1, 1, 1, 1), d(1, 1, -1, 1)};
    case FormKind::Tag::Symplectic: return {id, d(1, -1, 1, -1), Mat4(-id), d(-1, 1, -1, 1)};
    case FormKind::Tag::Flip: return {id, d(1, -1, -1, 1), Mat4(-id), d(-1, 1, 1, -1)};
    case FormKind::Tag::K: return {id, d(1, -1, 1, -1), Mat4(-id), d(-1, 1, -1, 1)};
    default: break;
  }
  throw Error(ErrorCode::UnsupportedForm, "no involution table for " + form.name());
}

inline Mat4 symmetric_group_element(const FormKind& form, std::uint64_t seed, int involution) {
  const Mat4 t = oracle::sample_group_element(form, seed, 2.0);
  const Mat4 s = symmetric_involutions(form)[static_cast<std::size_t>(involution % 4)];
  const Mat4 x = t * s * t.transpose();
  return 0.5 * (x + x.transpose());
}

/// Orthonormal basis (columns, vectorized) of the tangent space at X of the
/// symmetric elements of G_M: {X Z : Z in the Lie algebra, X Z symmetric}.
inline MatX symmetric_tangent_basis(const Mat4& x, const Mat4& m) {
  MatX lie(16, 16);
  for (int k = 0; k < 16; ++k) {
    Mat4 e = Mat4::Zero();
    e(k / 4, k % 4) = 1.0;
    lie.col(k) = oracle::project_to_lie_algebra(e, m).reshaped();
  }
  Eigen::JacobiSVD<MatX> lie_svd(lie, Eigen::ComputeFullU);
  const auto lie_rank = (lie_svd.singularValues().array() > 1e-10).count();
  const MatX algebra = lie_svd.matrixU().leftCols(lie_rank);

  MatX skew(16, lie_rank);
  MatX image(16, lie_rank);
  for (Eigen::Index k = 0; k < lie_rank; ++k) {
    const Mat4 z = algebra.col(k).reshaped(4, 4);
    const Mat4 xz = x * z;
    image.col(k) = xz.reshaped();
    skew.col(k) = Mat4(xz - xz.transpose()).reshaped();
  }
  Eigen::JacobiSVD<MatX> skew_svd(skew, Eigen::ComputeFullV);
  const double cut = 1e-10 * detail::scale_of(skew_svd.singularValues()(0));
  const auto rank = (skew_svd.singularValues().array() > cut).count();
  const MatX tangent = image * skew_svd.matrixV().rightCols(lie_rank - rank);
  Eigen::JacobiSVD<MatX> t_svd(tangent, Eigen::ComputeThinU);
  const auto t_rank = (t_svd.singularValues().array() > 1e-10 * detail::scale_of(t_svd.singularValues()(0))).count();
  return t_svd.matrixU().leftCols(t_rank);
}

/// Symmetric direction of unit Frobenius norm normal to the symmetric
/// elements of G_M at X, from the symmetric part of `raw`.
inline Mat4 normal_direction(const Mat4& x, const Mat4& m, const Mat4& raw) {
  const MatX t = symmetric_tangent_basis(x, m);
  const Mat4 sym = 0.5 * (raw + raw.transpose());
  Eigen::VectorXd v = sym.reshaped();
  v -= t * (t.transpose() * v);
  const Mat4 n = v.reshaped(4, 4);
  return n / n.norm();
}

inline constexpr std::array<Component, 4> kG22Components{Component::so_plus, Component::det_plus_blocks_negative,
                                                         Component::det_minus_a_positive,
                                                         Component::det_minus_a_negative};
inline constexpr std::array<Component, 4> kLorentzComponents{
    Component::proper_orthochronous, Component::proper_nonorthochronous, Component::improper_orthochronous,
    Component::improper_nonorthochronous};

inline double max_abs(const MatX& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace qpolar::testing
