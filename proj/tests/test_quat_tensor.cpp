#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace qpolar {
namespace {

Quaternion random_quaternion(oracle::Rng& rng) {
  return {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
}

Quaternion random_unit(oracle::Rng& rng) {
  const Quaternion q = random_quaternion(rng);
  return (1.0 / q.norm()) * q;
}

Mat4 flip4() {
  Mat4 f = Mat4::Zero();
  for (int i = 0; i < 4; ++i) f(i, 3 - i) = 1.0;
  return f;
}

TEST(ProductTensor, NamedForms) {
  const Quaternion one{1, 0, 0, 0}, i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1};
  EXPECT_EQ(matrix_of_product_tensor(one, one), Mat4::Identity());
  EXPECT_EQ(matrix_of_product_tensor(i, i), Mat4(Vec4(1, 1, -1, -1).asDiagonal()));
  Mat4 j4 = Mat4::Zero();
  j4.topRightCorner<2, 2>().setIdentity();
  j4.bottomLeftCorner<2, 2>() = -Mat2::Identity();
  EXPECT_EQ(matrix_of_product_tensor(one, j), j4);
  Mat4 k4 = Mat4::Zero();
  k4.topRightCorner<2, 2>().setIdentity();
  k4.bottomLeftCorner<2, 2>().setIdentity();
  EXPECT_EQ(matrix_of_product_tensor(i, k), k4);
  // With columns p e_k conj(q), the flip is M_{j(x)i}; M_{i(x)j} is the
  // signed anti-diagonal.
  EXPECT_EQ(matrix_of_product_tensor(j, i), flip4());
  EXPECT_EQ(basis_matrix({Unit::j, Unit::i}), flip4());
  Mat4 signed_flip = Mat4::Zero();
  signed_flip(0, 3) = -1;
  signed_flip(1, 2) = 1;
  signed_flip(2, 1) = 1;
  signed_flip(3, 0) = -1;
  EXPECT_EQ(basis_matrix({Unit::i, Unit::j}), signed_flip);
}

TEST(ProductTensor, Homomorphism) {
  oracle::Rng rng(21);
  for (int n = 0; n < 200; ++n) {
    const Quaternion p = random_quaternion(rng), q = random_quaternion(rng);
    const Quaternion p2 = random_quaternion(rng), q2 = random_quaternion(rng);
    const Mat4 lhs = matrix_of_product_tensor(p, q) * matrix_of_product_tensor(p2, q2);
    const Mat4 rhs = matrix_of_product_tensor(p * p2, q * q2);
    EXPECT_LE((lhs - rhs).norm(), 1e-13);
  }
}

TEST(ProductTensor, ConjugationIsTranspose) {
  oracle::Rng rng(22);
  for (int n = 0; n < 200; ++n) {
    const Quaternion p = random_quaternion(rng), q = random_quaternion(rng);
    EXPECT_LE((matrix_of_product_tensor(p.conj(), q.conj()) - matrix_of_product_tensor(p, q).transpose()).norm(),
              1e-15);
  }
  for (int a = 0; a < 16; ++a) {
    const BasisIndex idx = BasisIndex::from_flat(a);
    const Quaternion p = unit_quaternion(idx.left), q = unit_quaternion(idx.right);
    EXPECT_EQ(matrix_of_product_tensor(p.conj(), q.conj()), basis_matrix(idx).transpose());
  }
}

TEST(BasisMatrices, TraceOrthogonal) {
  for (int a = 0; a < 16; ++a) {
    for (int b = 0; b < 16; ++b) {
      const double t = (basis_matrix(BasisIndex::from_flat(a)).transpose() * basis_matrix(BasisIndex::from_flat(b))).trace();
      EXPECT_EQ(t, a == b ? 4.0 : 0.0);
    }
  }
  EXPECT_EQ(basis_matrix({Unit::one, Unit::one}), Mat4::Identity());
}

TEST(BasisMatrices, SymmetryMatchesUnits) {
  for (int a = 0; a < 16; ++a) {
    const BasisIndex idx = BasisIndex::from_flat(a);
    const Mat4 m = basis_matrix(idx);
    if (idx.symmetric()) {
      EXPECT_EQ(m, m.transpose()) << idx.name();
    } else {
      EXPECT_EQ(m, Mat4(-m.transpose())) << idx.name();
    }
  }
}

TEST(RepOfMatrix, Examples) {
  QuatTensorRep r = rep_of_matrix(Mat4::Identity());
  EXPECT_EQ(r.c, 1.0);
  EXPECT_EQ(r.p.norm() + r.q.norm() + r.r.norm() + r.s.norm() + r.t.norm(), 0.0);

  r = rep_of_matrix(Mat4(Vec4(1, 1, -1, -1).asDiagonal()));
  EXPECT_EQ(r.c, 0.0);
  EXPECT_EQ(r.p, Vec3(1, 0, 0));
  EXPECT_EQ(r.q.norm() + r.r.norm() + r.s.norm() + r.t.norm(), 0.0);
}

TEST(RepOfMatrix, RoundTripOnElementaryAndRandom) {
  for (int a = 0; a < 16; ++a) {
    Mat4 e = Mat4::Zero();
    e(a / 4, a % 4) = 1.0;
    EXPECT_LE((rep_of_matrix(e).reconstruct() - e).norm(), 1e-15);
  }
  oracle::Rng rng(23);
  for (int n = 0; n < 200; ++n) {
    const Mat4 x = rng.uniform_mat4(-5, 5);
    EXPECT_LE((rep_of_matrix(x).reconstruct() - x).norm(), 1e-13);
  }
}

TEST(RepOfMatrix, SymmetricAntisymmetricSplit) {
  oracle::Rng rng(24);
  for (int n = 0; n < 100; ++n) {
    const Mat4 x = rng.uniform_mat4(-2, 2);
    QuatTensorRep sym = rep_of_matrix(x);
    QuatTensorRep anti;
    anti.s = sym.s;
    anti.t = sym.t;
    sym.s.setZero();
    sym.t.setZero();
    EXPECT_LE((sym.reconstruct() - 0.5 * (x + x.transpose())).norm(), 1e-14);
    EXPECT_LE((anti.reconstruct() - 0.5 * (x - x.transpose())).norm(), 1e-14);
  }
}

TEST(Similarity, CongruenceToCanonical) {
  for (int a = 0; a < 16; ++a) {
    const BasisIndex idx = BasisIndex::from_flat(a);
    const Similarity sim = similarity_to_canonical(idx);
    EXPECT_LE((sim.s.transpose() * sim.s - Mat4::Identity()).norm(), 1e-13) << idx.name();
    const Mat4 image = sim.s.transpose() * (sim.sign * basis_matrix(idx)) * sim.s;
    EXPECT_LE((image - canonical_matrix(sim.canonical)).norm(), 1e-13) << idx.name();
    const CanonicalForm expect = a == 0                          ? CanonicalForm::I4
                                 : idx.symmetric()               ? CanonicalForm::I22
                                                                 : CanonicalForm::J4;
    EXPECT_EQ(sim.canonical, expect) << idx.name();
  }
}

TEST(Similarity, NamedCases) {
  const Similarity ii = similarity_to_canonical({Unit::i, Unit::i});
  EXPECT_EQ(ii.canonical, CanonicalForm::I22);
  EXPECT_LE((ii.s - Mat4::Identity()).norm(), 1e-15);

  const Similarity one_i = similarity_to_canonical({Unit::one, Unit::i});
  EXPECT_EQ(one_i.canonical, CanonicalForm::J4);
  const double h = std::sqrt(0.5);
  EXPECT_LE((one_i.s - matrix_of_product_tensor({1, 0, 0, 0}, {0, h, h, 0})).norm(), 1e-15);

  const Similarity ij = similarity_to_canonical({Unit::i, Unit::j});
  EXPECT_EQ(ij.canonical, CanonicalForm::I22);
}

TEST(UnitPair, Examples) {
  UnitPair up = rotation_to_unit_pair(Mat4::Identity());
  EXPECT_LE((up.u.vec() - Vec4(1, 0, 0, 0)).norm(), 1e-15);
  EXPECT_LE((up.v.vec() - Vec4(1, 0, 0, 0)).norm(), 1e-15);

  up = rotation_to_unit_pair(Mat4(Vec4(1, 1, -1, -1).asDiagonal()));
  EXPECT_LE((up.u.vec() - Vec4(0, 1, 0, 0)).norm(), 1e-15);
  EXPECT_LE((up.v.vec() - Vec4(0, 1, 0, 0)).norm(), 1e-15);
}

TEST(UnitPair, RecoversPairUpToJointSign) {
  oracle::Rng rng(25);
  for (int n = 0; n < 300; ++n) {
    const Quaternion u = random_unit(rng), v = random_unit(rng);
    const UnitPair up = rotation_to_unit_pair(matrix_of_product_tensor(u, v));
    const double s = up.u.vec().dot(u.vec()) > 0 ? 1.0 : -1.0;
    EXPECT_LE((up.u.vec() - s * u.vec()).norm(), 1e-12);
    EXPECT_LE((up.v.vec() - s * v.vec()).norm(), 1e-12);
  }
}

TEST(UnitPair, RejectsReflections) {
  try {
    rotation_to_unit_pair(Mat4(Vec4(1, 1, 1, -1).asDiagonal()));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSpecialOrthogonal);
  }
}

}  // namespace
}  // namespace qpolar
