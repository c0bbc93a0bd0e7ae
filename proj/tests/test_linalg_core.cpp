#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"

namespace qpolar {
namespace {

using testing::random_spd2;

TEST(Cholesky2x2, IdentityIsItsOwnFactor) {
  EXPECT_TRUE(cholesky_lower_2x2(Mat2::Identity()).isApprox(Mat2::Identity()));
}

TEST(Cholesky2x2, KnownFactor) {
  Mat2 s;
  s << 4, 2, 2, 2;
  Mat2 l;
  l << 2, 0, 1, 1;
  EXPECT_LT((cholesky_lower_2x2(s) - l).norm(), 1e-15);
}

TEST(Cholesky2x2, ZeroPivotGivesZeroColumn) {
  Mat2 s;
  s << 0, 0, 0, 1;
  Mat2 l;
  l << 0, 0, 0, 1;
  EXPECT_LT((cholesky_lower_2x2(s) - l).norm(), 1e-15);
}

TEST(Cholesky2x2, Errors) {
  Mat2 asym;
  asym << 1, 2, 0, 1;
  try {
    cholesky_lower_2x2(asym);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSymmetric);
  }
  Mat2 indefinite;
  indefinite << 1, 2, 2, 1;
  try {
    cholesky_lower_2x2(indefinite);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPSD);
  }
}

TEST(PosdefSqrt2x2, Examples) {
  EXPECT_LT((posdef_sqrt_2x2(Mat2::Identity()) - Mat2::Identity()).norm(), 1e-15);
  EXPECT_LT((posdef_sqrt_2x2(Eigen::Vector2d(4, 1).asDiagonal().toDenseMatrix()) - Mat2(Eigen::Vector2d(2, 1).asDiagonal())).norm(),
            1e-15);
  Mat2 y;
  y << 2, 1, 1, 2;
  const double s3 = std::sqrt(3.0);
  Mat2 expect;
  expect << (s3 + 1) / 2, (s3 - 1) / 2, (s3 - 1) / 2, (s3 + 1) / 2;
  EXPECT_LT((posdef_sqrt_2x2(y) - expect).norm(), 1e-15);
}

TEST(PosdefSqrt2x2, RejectsIndefinite) {
  Mat2 y;
  y << 1, 3, 3, 1;
  try {
    posdef_sqrt_2x2(y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPD);
  }
}

TEST(PosdefSqrt2x2, SquaresBackAndIsPositive) {
  oracle::Rng rng(11);
  for (int n = 0; n < 500; ++n) {
    const Mat2 y = random_spd2(rng, 3.0);
    const Mat2 r = posdef_sqrt_2x2(y);
    EXPECT_LE((r * r - y).norm(), 1e-12 * detail::scale_of(y.norm()));
    EXPECT_TRUE(is_posdef_2x2(r));
    EXPECT_LE((r - r.transpose()).norm(), 0.0);
  }
}

TEST(PosdefSqrt2x2, SquareRootsDifferByRotationOrReflection) {
  oracle::Rng rng(12);
  for (int n = 0; n < 200; ++n) {
    const Mat2 y = random_spd2(rng);
    const Mat2 z1 = posdef_sqrt_2x2(y);
    const Mat2 z2 = cholesky_lower_2x2(y);
    const Mat2 z3 = z2 * reflection_V(rng.uniform(-3.0, 3.0));
    for (const Mat2& z : {z2, z3}) {
      const Mat2 w = z * z.transpose();
      ASSERT_LE((w - y).norm(), 1e-12 * detail::scale_of(y.norm()));
      // Z Z^T = Y = Z1 Z1^T, so Z1^{-1} Z is orthogonal.
      const Mat2 o = z1.inverse() * z;
      EXPECT_LE((o.transpose() * o - Mat2::Identity()).norm(), 1e-12);
      const double theta = std::atan2(o(1, 0), o(0, 0));
      if (z1.determinant() * z.determinant() > 0.0) {
        EXPECT_LE((o - rotation_U(theta)).norm(), 1e-12);
      } else {
        EXPECT_LE((o - reflection_V(theta)).norm(), 1e-12);
      }
    }
  }
}

TEST(PosdefSqrt2x2, AMinusIIsPsdWhenASquaredMinusIIs) {
  oracle::Rng rng(13);
  for (int n = 0; n < 200; ++n) {
    MatX b(2, 2);
    b << rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3);
    const MatX a = complete_given_B(b).topLeftCorner(2, 2);
    EXPECT_TRUE(is_psd(a - MatX::Identity(2, 2), 1e-12));
  }
}

TEST(RotationsAndReflections, Examples) {
  EXPECT_LT((rotation_U(0.0) - Mat2::Identity()).norm(), 1e-15);
  Mat2 quarter;
  quarter << 0, -1, 1, 0;
  EXPECT_LT((rotation_U(std::numbers::pi / 2) - quarter).norm(), 1e-15);
  EXPECT_LT((reflection_V(0.0) - Mat2(Eigen::Vector2d(1, -1).asDiagonal())).norm(), 1e-15);
  EXPECT_LT((reflection_V(std::numbers::pi) - Mat2(Eigen::Vector2d(-1, 1).asDiagonal())).norm(), 1e-15);
  for (double t = -7.0; t < 7.0; t += 0.37) {
    EXPECT_LE((rotation_U(t).transpose() * rotation_U(t) - Mat2::Identity()).norm(), 1e-15);
    EXPECT_LE((reflection_V(t).transpose() * reflection_V(t) - Mat2::Identity()).norm(), 1e-15);
    EXPECT_NEAR(rotation_U(t).determinant(), 1.0, 1e-15);
    EXPECT_NEAR(reflection_V(t).determinant(), -1.0, 1e-15);
  }
}

TEST(Svd2x2, Examples) {
  Svd2 s = svd_2x2(Mat2::Identity());
  EXPECT_NEAR(s.sigma(0), 1.0, 1e-15);
  EXPECT_NEAR(s.sigma(1), 1.0, 1e-15);
  s = svd_2x2(Mat2(Eigen::Vector2d(3, 0).asDiagonal()));
  EXPECT_NEAR(s.sigma(0), 3.0, 1e-15);
  EXPECT_NEAR(s.sigma(1), 0.0, 1e-15);

  Mat2 b;
  b << 1, 2, 3, 4;
  s = svd_2x2(b);
  const oracle::EigSym4 e = oracle::jacobi_eig_sym4(
      (Mat4() << b.transpose() * b, Mat2::Zero(), Mat2::Zero(), Mat2::Zero()).finished());
  EXPECT_NEAR(s.sigma(0), std::sqrt(e.values(3)), 1e-13);
  EXPECT_NEAR(s.sigma(1), std::sqrt(e.values(2)), 1e-13);
  EXPECT_LE((s.u * s.sigma.asDiagonal() * s.v.transpose() - b).norm(), 1e-13);
}

TEST(Svd2x2, RandomReconstruction) {
  oracle::Rng rng(14);
  for (int n = 0; n < 500; ++n) {
    const Mat2 b = testing::random_mat2(rng, -3, 3);
    const Svd2 s = svd_2x2(b);
    EXPECT_GE(s.sigma(0), s.sigma(1));
    EXPECT_GE(s.sigma(1), 0.0);
    EXPECT_LE((s.u.transpose() * s.u - Mat2::Identity()).norm(), 1e-13);
    EXPECT_LE((s.v.transpose() * s.v - Mat2::Identity()).norm(), 1e-13);
    EXPECT_LE((s.u * s.sigma.asDiagonal() * s.v.transpose() - b).norm(), 1e-12);
  }
}

TEST(HermitianSqrt2x2, Examples) {
  EXPECT_LT((hermitian_posdef_sqrt_2x2(CMat2::Identity()) - CMat2::Identity()).norm(), 1e-15);
  CMat2 d = CMat2::Zero();
  d(0, 0) = 4.0;
  d(1, 1) = 1.0;
  CMat2 r = CMat2::Zero();
  r(0, 0) = 2.0;
  r(1, 1) = 1.0;
  EXPECT_LT((hermitian_posdef_sqrt_2x2(d) - r).norm(), 1e-15);

  const Complex i(0.0, 1.0);
  CMat2 m;
  m << 2.0, i, -i, 2.0;
  const CMat2 h = hermitian_posdef_sqrt_2x2(m);
  EXPECT_LT((h * h - m).norm(), 1e-14);
  EXPECT_LT((h - h.adjoint()).norm(), 1e-15);
  EXPECT_GT(h(0, 0).real(), 0.0);
  EXPECT_GT(h.determinant().real(), 0.0);
}

TEST(HermitianSqrt2x2, RejectsNonPositive) {
  CMat2 m = CMat2::Identity();
  m(1, 1) = -1.0;
  try {
    hermitian_posdef_sqrt_2x2(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPD);
  }
}

TEST(GeneralKernels, PosdefSqrtAndPsd) {
  oracle::Rng rng(15);
  for (int n = 0; n < 50; ++n) {
    MatX a(3, 3);
    for (int k = 0; k < 9; ++k) a(k / 3, k % 3) = rng.uniform(-1, 1);
    const MatX y = a * a.transpose() + 0.1 * MatX::Identity(3, 3);
    const MatX r = posdef_sqrt(y);
    EXPECT_LE((r * r - y).norm(), 1e-12);
    EXPECT_TRUE(is_posdef(y));
    const MatX l = cholesky_lower_psd(y);
    EXPECT_LE((l * l.transpose() - y).norm(), 1e-12);
  }
  MatX indefinite = MatX::Identity(3, 3);
  indefinite(2, 2) = -1.0;
  EXPECT_FALSE(is_posdef(indefinite));
  EXPECT_FALSE(is_psd(indefinite, 1e-12));
}

}  // namespace
}  // namespace qpolar
