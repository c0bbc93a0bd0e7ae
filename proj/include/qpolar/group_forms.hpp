#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "qpolar/linalg_core.hpp"
#include "qpolar/quat_tensor.hpp"
#include "qpolar/types.hpp"

namespace qpolar {

inline constexpr double kMembershipTol = 1e-10;

/// Which bilinear form M defines G_M = {X : X^T M X = M}.
struct FormKind {
  enum class Tag { Basis, Minkowski, Ipq, Symplectic, Flip, K };

  Tag tag = Tag::Basis;
  BasisIndex basis{};
  int p = 0;  // Ipq: number of +1 entries
  int q = 0;  // Ipq: number of -1 entries
  int n = 0;  // Symplectic / Flip / K: half dimension

  static FormKind Basis(BasisIndex idx) { return {Tag::Basis, idx, 0, 0, 0}; }
  static FormKind Minkowski() { return {Tag::Minkowski, {}, 1, 3, 0}; }
  static FormKind Ipq(int p, int q) { return {Tag::Ipq, {}, p, q, 0}; }
  static FormKind Symplectic(int n) { return {Tag::Symplectic, {}, 0, 0, n}; }
  static FormKind Flip(int n) { return {Tag::Flip, {}, 0, 0, n}; }
  static FormKind K(int n) { return {Tag::K, {}, 0, 0, n}; }

  int dim() const {
    switch (tag) {
      case Tag::Basis:
      case Tag::Minkowski: return 4;
      case Tag::Ipq: return p + q;
      default: return 2 * n;
    }
  }

  std::string name() const {
    switch (tag) {
      case Tag::Basis: return "M_" + basis.name();
      case Tag::Minkowski: return "I13";
      case Tag::Ipq: return "I" + std::to_string(p) + std::to_string(q);
      case Tag::Symplectic: return "J" + std::to_string(2 * n);
      case Tag::Flip: return "F" + std::to_string(2 * n);
      case Tag::K: return "K" + std::to_string(2 * n);
    }
    return "?";
  }
};

inline MatX form_matrix(const FormKind& form) {
  const int d = form.dim();
  MatX m = MatX::Zero(d, d);
  const int n = form.n;
  switch (form.tag) {
    case FormKind::Tag::Basis: return basis_matrix(form.basis);
    case FormKind::Tag::Minkowski:
    case FormKind::Tag::Ipq:
      for (int i = 0; i < d; ++i) m(i, i) = i < form.p ? 1.0 : -1.0;
      return m;
    case FormKind::Tag::Symplectic:
      m.topRightCorner(n, n).setIdentity();
      m.bottomLeftCorner(n, n) = -MatX::Identity(n, n);
      return m;
    case FormKind::Tag::Flip:
      for (int i = 0; i < d; ++i) m(i, d - 1 - i) = 1.0;
      return m;
    case FormKind::Tag::K:
      m.topRightCorner(n, n).setIdentity();
      m.bottomLeftCorner(n, n).setIdentity();
      return m;
  }
  return m;
}

struct Membership {
  bool member = false;
  double residual = 0.0;  // |X^T M X - M|_F
};

inline Membership is_in_group(const MatX& x, const FormKind& form, double tol = kMembershipTol) {
  const MatX m = form_matrix(form);
  if (x.rows() != m.rows() || x.cols() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix is " + std::to_string(x.rows()) + "x" +
                                                  std::to_string(x.cols()) + ", form " + form.name() +
                                                  " needs " + std::to_string(m.rows()));
  }
  const double residual = (x.transpose() * m * x - m).norm();
  return {residual <= tol * detail::scale_of(m.norm()), residual};
}

// ---------------------------------------------------------------------------
// Symmetric elements: block conditions.

struct BlockCondition {
  std::string label;
  double residual = 0.0;
  bool satisfied = false;
};

struct BlockReport {
  std::vector<BlockCondition> conditions;

  bool all_satisfied() const {
    for (const auto& c : conditions) {
      if (!c.satisfied) return false;
    }
    return true;
  }
  double max_residual() const {
    double m = 0.0;
    for (const auto& c : conditions) m = std::max(m, c.residual);
    return m;
  }
};

namespace detail {

enum class BlockFamily { Ipq, Minkowski, Symplectic, Flip, K };

struct BlockShape {
  BlockFamily family;
  int top;  // rows of the NW block
};

inline BlockShape block_shape(const FormKind& form) {
  using Tag = FormKind::Tag;
  switch (form.tag) {
    case Tag::Ipq: return {BlockFamily::Ipq, form.p};
    case Tag::Minkowski: return {BlockFamily::Minkowski, 2};
    case Tag::Symplectic: return {BlockFamily::Symplectic, form.n};
    case Tag::Flip: return {BlockFamily::Flip, form.n};
    case Tag::K: return {BlockFamily::K, form.n};
    case Tag::Basis: {
      // Basis forms that coincide literally with one of the block families.
      const BasisIndex b = form.basis;
      if (b == BasisIndex{Unit::i, Unit::i}) return {BlockFamily::Ipq, 2};
      if (b == BasisIndex{Unit::one, Unit::j}) return {BlockFamily::Symplectic, 2};
      if (b == BasisIndex{Unit::j, Unit::i}) return {BlockFamily::Flip, 2};
      if (b == BasisIndex{Unit::i, Unit::k}) return {BlockFamily::K, 2};
      break;
    }
  }
  throw Error(ErrorCode::UnsupportedForm, "no block characterization for form " + form.name());
}

inline MatX flip_matrix(int n) {
  MatX f = MatX::Zero(n, n);
  for (int i = 0; i < n; ++i) f(i, n - 1 - i) = 1.0;
  return f;
}

}  // namespace detail

/// Residuals of the defining block conditions of a symmetric X = [[A, B], [B^T, D]]
/// in G_M. A condition is satisfied when its residual is below tol * max(1, |X|)^2.
inline BlockReport symmetric_block_report(const MatX& x, const FormKind& form, double tol = kMembershipTol) {
  const detail::BlockShape shape = detail::block_shape(form);
  if (x.rows() != form.dim() || x.cols() != form.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix does not match form " + form.name());
  }
  if (!is_symmetric(x, tol)) throw Error(ErrorCode::NotSymmetric, "symmetric_block_report needs symmetric X");

  const int t = shape.top;
  const int b = static_cast<int>(x.rows()) - t;
  const MatX a = x.topLeftCorner(t, t);
  const MatX bb = x.topRightCorner(t, b);
  const MatX d = x.bottomRightCorner(b, b);
  const MatX it = MatX::Identity(t, t);
  const MatX ib = MatX::Identity(b, b);

  BlockReport report;
  const double bound = tol * std::pow(detail::scale_of(x.norm()), 2);
  const auto add = [&](std::string label, const MatX& residual) {
    const double r = residual.norm();
    report.conditions.push_back({std::move(label), r, r <= bound});
  };

  switch (shape.family) {
    case detail::BlockFamily::Ipq:
      add("A^2 - B B^T = I", a * a - bb * bb.transpose() - it);
      add("A B = B D", a * bb - bb * d);
      add("D^2 - B^T B = I", d * d - bb.transpose() * bb - ib);
      break;
    case detail::BlockFamily::Minkowski: {
      Mat2 sz = Mat2::Identity();
      sz(1, 1) = -1.0;
      const MatX s = sz;
      add("A sz A - B B^T = sz", a * s * a - bb * bb.transpose() - s);
      add("A sz B = B D", a * s * bb - bb * d);
      add("D^2 - B^T sz B = I", d * d - bb.transpose() * s * bb - ib);
      break;
    }
    case detail::BlockFamily::Symplectic: {
      const MatX ba = bb * a;
      const MatX db = d * bb;
      add("B A symmetric", ba - ba.transpose());
      add("D B symmetric", db - db.transpose());
      add("A D = I + B^2", a * d - it - bb * bb);
      break;
    }
    case detail::BlockFamily::Flip: {
      const MatX f = detail::flip_matrix(t);
      const MatX bfa = bb * f * a;
      const MatX dfb = d * f * bb;
      add("B F A antisymmetric", bfa + bfa.transpose());
      add("D F B antisymmetric", dfb + dfb.transpose());
      add("B F B + A F D = F", bb * f * bb + a * f * d - f);
      break;
    }
    case detail::BlockFamily::K: {
      const MatX ba = bb * a;
      const MatX db = d * bb;
      add("B A antisymmetric", ba + ba.transpose());
      add("D B antisymmetric", db + db.transpose());
      add("B^2 = I - A D", bb * bb - it + a * d);
      break;
    }
  }
  return report;
}

/// For symmetric X in G_M (block families above), positive definiteness is
/// equivalent to positivity of both diagonal blocks.
inline bool is_posdef_in_group(const MatX& x, const FormKind& form, double tol = kMembershipTol) {
  if (!is_symmetric(x, tol)) throw Error(ErrorCode::NotInGroup, "is_posdef_in_group needs symmetric X");
  const BlockReport report = symmetric_block_report(x, form, tol);
  if (!report.all_satisfied()) {
    throw Error(ErrorCode::NotInGroup, "block conditions fail for form " + form.name());
  }
  const int t = detail::block_shape(form).top;
  const int b = static_cast<int>(x.rows()) - t;
  return is_posdef(x.topLeftCorner(t, t)) && is_posdef(x.bottomRightCorner(b, b));
}

// ---------------------------------------------------------------------------
// Connected components.

enum class Component {
  // G_{I_{n,n}}
  so_plus,                  // det X = 1, det A > 0, det D > 0
  det_plus_blocks_negative, // det X = 1, det A < 0, det D < 0
  det_minus_a_positive,     // det X = -1, det A > 0, det D < 0
  det_minus_a_negative,     // det X = -1, det A < 0, det D > 0
  // G_{I_{1,3}}
  proper_orthochronous,     // det X = 1, X11 > 0
  proper_nonorthochronous,  // det X = 1, X11 < 0
  improper_orthochronous,   // det X = -1, X11 > 0
  improper_nonorthochronous // det X = -1, X11 < 0
};

inline const char* to_string(Component c) {
  switch (c) {
    case Component::so_plus: return "so_plus";
    case Component::det_plus_blocks_negative: return "det_plus_blocks_negative";
    case Component::det_minus_a_positive: return "det_minus_a_positive";
    case Component::det_minus_a_negative: return "det_minus_a_negative";
    case Component::proper_orthochronous: return "proper_orthochronous";
    case Component::proper_nonorthochronous: return "proper_nonorthochronous";
    case Component::improper_orthochronous: return "improper_orthochronous";
    case Component::improper_nonorthochronous: return "improper_nonorthochronous";
  }
  return "?";
}

struct ComponentLabel {
  FormKind group;
  Component component = Component::so_plus;
  int det_sign = 0;
  int det_a_sign = 0;  // G_{I_{n,n}} only
  int det_d_sign = 0;  // G_{I_{n,n}} only
  int x11_sign = 0;    // Lorentz only

  bool is_identity_component() const {
    return component == Component::so_plus || component == Component::proper_orthochronous;
  }
};

inline constexpr double kSignDeadZone = 1e-12;

namespace detail {

inline int checked_sign(double v, const char* what) {
  if (std::abs(v) <= kSignDeadZone) {
    throw Error(ErrorCode::DegenerateBlock, std::string(what) + " is inside the sign dead zone");
  }
  return v > 0.0 ? 1 : -1;
}

inline bool is_balanced_ipq(const FormKind& form) {
  return (form.tag == FormKind::Tag::Ipq && form.p == form.q && form.p > 0) ||
         (form.tag == FormKind::Tag::Basis && form.basis == BasisIndex{Unit::i, Unit::i});
}

}  // namespace detail

inline ComponentLabel component_of(const MatX& x, const FormKind& form, double tol = kMembershipTol) {
  const bool lorentz = form.tag == FormKind::Tag::Minkowski;
  if (!lorentz && !detail::is_balanced_ipq(form)) {
    throw Error(ErrorCode::UnsupportedForm, "component_of supports I_{n,n} and I_{1,3}, not " + form.name());
  }
  if (!is_in_group(x, form, tol).member) throw Error(ErrorCode::NotInGroup, "component_of input not in " + form.name());

  ComponentLabel label;
  label.group = form;
  label.det_sign = detail::checked_sign(x.determinant(), "det X");
  if (lorentz) {
    label.x11_sign = detail::checked_sign(x(0, 0), "X11");
    if (label.det_sign > 0) {
      label.component = label.x11_sign > 0 ? Component::proper_orthochronous : Component::proper_nonorthochronous;
    } else {
      label.component = label.x11_sign > 0 ? Component::improper_orthochronous : Component::improper_nonorthochronous;
    }
    return label;
  }

  const auto n = x.rows() / 2;
  label.det_a_sign = detail::checked_sign(x.topLeftCorner(n, n).determinant(), "det A");
  label.det_d_sign = detail::checked_sign(x.bottomRightCorner(n, n).determinant(), "det D");
  const int a = label.det_a_sign;
  const int d = label.det_d_sign;
  if (label.det_sign > 0 && a > 0 && d > 0) {
    label.component = Component::so_plus;
  } else if (label.det_sign > 0 && a < 0 && d < 0) {
    label.component = Component::det_plus_blocks_negative;
  } else if (label.det_sign < 0 && a > 0 && d < 0) {
    label.component = Component::det_minus_a_positive;
  } else if (label.det_sign < 0 && a < 0 && d > 0) {
    label.component = Component::det_minus_a_negative;
  } else {
    throw Error(ErrorCode::NotInGroup, "determinant signs are inconsistent with G_{I_{n,n}}");
  }
  return label;
}

}  // namespace qpolar
