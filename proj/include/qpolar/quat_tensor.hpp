#pragma once

#include <array>
#include <cmath>
#include <string>

#include "qpolar/types.hpp"

namespace qpolar {

// Coordinates of H are (w, x, y, z) along (1, i, j, k).
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static Quaternion from_vec(const Vec4& v) { return {v(0), v(1), v(2), v(3)}; }
  static Quaternion pure(const Vec3& v) { return {0.0, v(0), v(1), v(2)}; }

  Vec4 vec() const { return Vec4(w, x, y, z); }
  Vec3 imag() const { return Vec3(x, y, z); }
  Quaternion conj() const { return {w, -x, -y, -z}; }
  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  friend Quaternion operator*(double s, const Quaternion& a) { return {s * a.w, s * a.x, s * a.y, s * a.z}; }
  friend Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
};

enum class Unit { one = 0, i = 1, j = 2, k = 3 };

inline Quaternion unit_quaternion(Unit e) {
  Vec4 v = Vec4::Zero();
  v(static_cast<int>(e)) = 1.0;
  return Quaternion::from_vec(v);
}

inline char unit_name(Unit e) { return "1ijk"[static_cast<int>(e)]; }

/// Basis element M_{left (x) right}.
struct BasisIndex {
  Unit left = Unit::one;
  Unit right = Unit::one;

  int flat() const { return 4 * static_cast<int>(left) + static_cast<int>(right); }
  static BasisIndex from_flat(int n) { return {static_cast<Unit>(n / 4), static_cast<Unit>(n % 4)}; }
  std::string name() const { return {unit_name(left), unit_name(right)}; }
  bool symmetric() const { return (left == Unit::one) == (right == Unit::one); }

  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// Matrix of x -> p x conj(q) acting on H = R^4.
inline Mat4 matrix_of_product_tensor(const Quaternion& p, const Quaternion& q) {
  const Quaternion qbar = q.conj();
  Mat4 m;
  for (int k = 0; k < 4; ++k) {
    m.col(k) = (p * unit_quaternion(static_cast<Unit>(k)) * qbar).vec();
  }
  return m;
}

inline Mat4 basis_matrix(BasisIndex idx) {
  return matrix_of_product_tensor(unit_quaternion(idx.left), unit_quaternion(idx.right));
}

namespace detail {

inline const std::array<Mat4, 16>& basis_table() {
  static const std::array<Mat4, 16> table = [] {
    std::array<Mat4, 16> t;
    for (int n = 0; n < 16; ++n) t[n] = basis_matrix(BasisIndex::from_flat(n));
    return t;
  }();
  return table;
}

}  // namespace detail

/// Coefficients of X = c 1(x)1 + p(x)i + q(x)j + r(x)k + s(x)1 + 1(x)t, with
/// p, q, r, s, t pure imaginary (stored as their i, j, k components).
struct QuatTensorRep {
  double c = 0.0;
  Vec3 p = Vec3::Zero();
  Vec3 q = Vec3::Zero();
  Vec3 r = Vec3::Zero();
  Vec3 s = Vec3::Zero();
  Vec3 t = Vec3::Zero();

  double coefficient(BasisIndex idx) const {
    const int a = static_cast<int>(idx.left);
    const int b = static_cast<int>(idx.right);
    if (a == 0) return b == 0 ? c : t(b - 1);
    switch (b) {
      case 0: return s(a - 1);
      case 1: return p(a - 1);
      case 2: return q(a - 1);
      default: return r(a - 1);
    }
  }

  double& coefficient(BasisIndex idx) {
    const int a = static_cast<int>(idx.left);
    const int b = static_cast<int>(idx.right);
    if (a == 0) return b == 0 ? c : t(b - 1);
    switch (b) {
      case 0: return s(a - 1);
      case 1: return p(a - 1);
      case 2: return q(a - 1);
      default: return r(a - 1);
    }
  }

  Mat4 reconstruct() const {
    Mat4 m = Mat4::Zero();
    const auto& table = detail::basis_table();
    for (int n = 0; n < 16; ++n) m += coefficient(BasisIndex::from_flat(n)) * table[n];
    return m;
  }

  bool has_antisymmetric_part(double tol) const { return s.norm() > tol || t.norm() > tol; }
};

/// The basis {M_{e(x)f}} is orthogonal with trace(M^T M) = 4, so every
/// coefficient is a normalized Frobenius inner product.
inline QuatTensorRep rep_of_matrix(const Mat4& x) {
  QuatTensorRep rep;
  const auto& table = detail::basis_table();
  for (int n = 0; n < 16; ++n) {
    rep.coefficient(BasisIndex::from_flat(n)) = 0.25 * table[n].cwiseProduct(x).sum();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Similarities between basis forms.

enum class CanonicalForm { I4, I22, J4 };

inline Mat4 canonical_matrix(CanonicalForm f) {
  switch (f) {
    case CanonicalForm::I4: return Mat4::Identity();
    case CanonicalForm::I22: return basis_matrix({Unit::i, Unit::i});
    case CanonicalForm::J4: return basis_matrix({Unit::one, Unit::j});
  }
  return Mat4::Identity();
}

inline const char* to_string(CanonicalForm f) {
  switch (f) {
    case CanonicalForm::I4: return "I4";
    case CanonicalForm::I22: return "I22";
    case CanonicalForm::J4: return "J4";
  }
  return "?";
}

/// Orthogonal S with S^T (sign * M_idx) S = canonical.
struct Similarity {
  Mat4 s = Mat4::Identity();
  CanonicalForm canonical = CanonicalForm::I4;
  int sign = 1;
};

/// Unit quaternion q with conj(q) * from * q = to for unit pure imaginary
/// `from` and `to`. Conjugation by a unit pure quaternion u is the half turn
/// about u, so the bisector of the two axes works unless they are opposite.
inline Quaternion conjugator(const Vec3& from, const Vec3& to) {
  const Vec3 mid = from + to;
  if (mid.norm() < 1e-12) {
    Vec3 perp = from.cross(Vec3::UnitX());
    if (perp.norm() < 0.5) perp = from.cross(Vec3::UnitY());
    return Quaternion::pure(perp.normalized());
  }
  if ((from - to).norm() < 1e-15) return {1.0, 0.0, 0.0, 0.0};
  return Quaternion::pure(mid.normalized());
}

inline Similarity similarity_to_canonical(BasisIndex idx) {
  const auto axis = [](Unit e) { return Vec3::Unit(static_cast<int>(e) - 1); };
  const Quaternion one{1.0, 0.0, 0.0, 0.0};
  Similarity out;
  if (idx.left == Unit::one && idx.right == Unit::one) {
    out.canonical = CanonicalForm::I4;
    return out;
  }
  if (idx.left != Unit::one && idx.right != Unit::one) {
    // S^T M_{e(x)f} S = M_{(conj(p) e p)(x)(conj(q) f q)} with S = M_{p(x)q}.
    const Quaternion p = conjugator(axis(idx.left), Vec3::UnitX());
    const Quaternion q = conjugator(axis(idx.right), Vec3::UnitX());
    out.s = matrix_of_product_tensor(p, q);
    out.canonical = CanonicalForm::I22;
    return out;
  }
  out.canonical = CanonicalForm::J4;
  if (idx.left == Unit::one) {
    const Quaternion q = conjugator(axis(idx.right), Vec3::UnitY());
    out.s = matrix_of_product_tensor(one, q);
    return out;
  }
  // -M_{i(x)1} = diag(J2, J2) = P^T J4 P with P = [e1 | e3 | e2 | e4].
  const Quaternion p = conjugator(axis(idx.left), Vec3::UnitX());
  Mat4 perm = Mat4::Zero();
  perm(0, 0) = perm(2, 1) = perm(1, 2) = perm(3, 3) = 1.0;
  out.s = matrix_of_product_tensor(p, one) * perm.transpose();
  out.sign = -1;
  return out;
}

struct UnitPair {
  Quaternion u;
  Quaternion v;
};

/// Unit quaternions (u, v) with M_{u(x)v} = R for R in SO(4). The coefficient
/// table of R in the basis {M_{e(x)f}} is the rank-one outer product u v^T;
/// the dominant row seeds the factorization. The pair is normalized so the
/// first nonzero component of u is positive.
inline UnitPair rotation_to_unit_pair(const Mat4& rot, double tol = 1e-10) {
  if ((rot.transpose() * rot - Mat4::Identity()).norm() > tol * 4.0 ||
      std::abs(rot.determinant() - 1.0) > tol * 4.0) {
    throw Error(ErrorCode::NotSpecialOrthogonal, "rotation_to_unit_pair input is not in SO(4)");
  }
  Mat4 table;
  const auto& basis = detail::basis_table();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) table(a, b) = 0.25 * basis[4 * a + b].cwiseProduct(rot).sum();
  }
  Eigen::Index row = 0;
  table.rowwise().norm().maxCoeff(&row);
  Vec4 v = table.row(row).transpose().normalized();
  Vec4 u = (table * v).normalized();
  for (int a = 0; a < 4; ++a) {
    if (std::abs(u(a)) > 1e-12) {
      if (u(a) < 0.0) {
        u = -u;
        v = -v;
      }
      break;
    }
  }
  return {Quaternion::from_vec(u), Quaternion::from_vec(v)};
}

}  // namespace qpolar
