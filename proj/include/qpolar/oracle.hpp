#pragma once

// Reference implementations used to cross-check the closed-form routes and as
// the fallback for the symplectic polar factor. None of these share code with
// the eigen-free algorithms they validate.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>

#include "qpolar/group_forms.hpp"
#include "qpolar/polar_factors.hpp"
#include "qpolar/types.hpp"

namespace qpolar::oracle {

/// Scaled Newton iteration Q <- (g Q + (g Q)^{-T}) / 2 with Frobenius scaling
/// g = sqrt(|Q^{-1}| / |Q|), dropped once the iterates settle.
inline PolarFactors newton_polar(const Mat4& x, double tol = 1e-14, int max_iter = 100) {
  if (std::abs(x.determinant()) <= tol * std::pow(detail::scale_of(x.norm()), 4)) {
    throw Error(ErrorCode::Singular, "newton_polar input is singular");
  }
  Mat4 q = x;
  bool scaling = true;
  int it = 0;
  bool converged = false;
  while (it < max_iter) {
    ++it;
    const Mat4 inv = q.inverse();
    const double g = scaling ? std::sqrt(inv.norm() / q.norm()) : 1.0;
    const Mat4 next = 0.5 * (g * q + inv.transpose() / g);
    const double change = (next - q).norm();
    q = next;
    if (change <= 1e-2) scaling = false;
    if (change <= tol * q.norm()) {
      converged = true;
      break;
    }
  }
  if (!converged && (q.transpose() * q - Mat4::Identity()).norm() > 1e-12) {
    throw Error(ErrorCode::NoConvergence, "newton_polar did not converge");
  }
  PolarFactors f;
  f.orthogonal = q;
  const Mat4 p = q.transpose() * x;
  f.posdef = 0.5 * (p + p.transpose());
  f.iterations = it;
  fill_residuals(f, x);
  return f;
}

struct EigSym4 {
  Vec4 values;   // ascending
  Mat4 vectors;  // columns
};

/// Cyclic Jacobi sweeps on a symmetric 4x4 matrix.
inline EigSym4 jacobi_eig_sym4(const Mat4& s, double tol = 1e-12) {
  if ((s - s.transpose()).norm() > tol * detail::scale_of(s.norm())) {
    throw Error(ErrorCode::NotSymmetric, "jacobi_eig_sym4 input is not symmetric");
  }
  Mat4 a = 0.5 * (s + s.transpose());
  Mat4 v = Mat4::Identity();
  const double target = 1e-16 * detail::scale_of(a.norm());
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) off += a(p, q) * a(p, q);
    }
    if (std::sqrt(2.0 * off) <= target) break;
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        Mat4 rot = Mat4::Identity();
        rot(p, p) = c;
        rot(q, q) = c;
        rot(p, q) = sn;
        rot(q, p) = -sn;
        a = rot.transpose() * a * rot;
        a(p, q) = a(q, p) = 0.0;
        v = v * rot;
      }
    }
  }
  std::array<int, 4> order{0, 1, 2, 3};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  EigSym4 out;
  for (int k = 0; k < 4; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

/// Positive definite square root of X^T X through the eigendecomposition.
inline Mat4 posdef_factor_by_eig(const Mat4& x) {
  const EigSym4 e = jacobi_eig_sym4(x.transpose() * x);
  return e.vectors * e.values.cwiseMax(0.0).cwiseSqrt().asDiagonal() * e.vectors.transpose();
}

/// Scaling and squaring with a Taylor series truncated once the next term is
/// below 1e-17 of the running sum.
inline Mat4 expm(const Mat4& z) {
  const double norm1 = z.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const Mat4 a = z / std::ldexp(1.0, squarings);
  Mat4 sum = Mat4::Identity();
  Mat4 term = Mat4::Identity();
  for (int k = 1; k < 40; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
    if (term.norm() <= 1e-17 * sum.norm()) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

/// Deterministic source: std::mt19937_64 bits mapped to [0, 1) through the top
/// 53 bits, so sample corpora do not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Mat4 uniform_mat4(double lo, double hi) {
    Mat4 m;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) m(i, j) = uniform(lo, hi);
    }
    return m;
  }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

/// Projection onto {Z : Z^T M + M Z = 0}; valid since M^{-1} = M^T for every
/// form here.
inline Mat4 project_to_lie_algebra(const Mat4& z, const Mat4& m) {
  return 0.5 * (z - m.transpose() * z.transpose() * m);
}

/// Random element of the identity component: expm(Z) for a Lie algebra
/// element Z with |Z|_F <= scale.
inline Mat4 sample_group_element(const FormKind& form, std::uint64_t seed, double scale = 1.0) {
  if (form.dim() != 4) throw Error(ErrorCode::UnsupportedForm, "sampler is limited to 4x4 forms");
  const Mat4 m = form_matrix(form);
  Rng rng(seed);
  Mat4 z = project_to_lie_algebra(rng.uniform_mat4(-1.0, 1.0), m);
  const double norm = z.norm();
  const double target = scale * rng.uniform();
  if (norm > 0.0) z *= target / norm;
  return expm(z);
}

/// Fixed reflector reaching `component` from the identity component.
inline Mat4 component_prefix(const FormKind& form, Component c) {
  const bool lorentz = form.tag == FormKind::Tag::Minkowski;
  const bool g22 = (form.tag == FormKind::Tag::Ipq && form.p == 2 && form.q == 2) ||
                   (form.tag == FormKind::Tag::Basis && form.basis == BasisIndex{Unit::i, Unit::i});
  if (!lorentz && !g22) throw Error(ErrorCode::UnsupportedForm, "component prefixes exist for I22 and I13 only");
  Vec4 d = Vec4::Ones();
  switch (c) {
    case Component::so_plus:
    case Component::proper_orthochronous:
      break;
    case Component::det_plus_blocks_negative: d << 1, -1, 1, -1; break;
    case Component::det_minus_a_positive: d << 1, 1, 1, -1; break;
    case Component::det_minus_a_negative: d << 1, -1, 1, 1; break;
    case Component::proper_nonorthochronous: d << -1, -1, -1, -1; break;
    case Component::improper_orthochronous: d << 1, -1, -1, -1; break;
    case Component::improper_nonorthochronous: d << -1, 1, 1, 1; break;
  }
  const bool lorentz_label = c == Component::proper_orthochronous || c == Component::proper_nonorthochronous ||
                             c == Component::improper_orthochronous || c == Component::improper_nonorthochronous;
  if (lorentz != lorentz_label) throw Error(ErrorCode::UnsupportedForm, "component label does not match the form");
  return d.asDiagonal();
}

inline Mat4 sample_other_components(const FormKind& form, Component c, std::uint64_t seed, double scale = 1.0) {
  return component_prefix(form, c) * sample_group_element(form, seed, scale);
}

}  // namespace qpolar::oracle
