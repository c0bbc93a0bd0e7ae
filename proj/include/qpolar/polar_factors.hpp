#pragma once

#include <limits>
#include <utility>

#include "qpolar/types.hpp"

namespace qpolar {

/// X = orthogonal * posdef, with residual diagnostics.
struct PolarFactors {
  Mat4 orthogonal = Mat4::Identity();
  Mat4 posdef = Mat4::Identity();
  double residual_reconstruction = 0.0;  // |Q P - X|_F
  double residual_orthogonality = 0.0;   // |Q^T Q - I|_F
  // (|Q^T M Q - M|_F, |P^T M P - M|_F); NaN when no form applies.
  std::pair<double, double> residual_group_membership{std::numeric_limits<double>::quiet_NaN(),
                                                      std::numeric_limits<double>::quiet_NaN()};
  int iterations = 0;  // Newton iterations, zero for closed-form routes
};

inline void fill_residuals(PolarFactors& f, const Mat4& x) {
  f.residual_reconstruction = (f.orthogonal * f.posdef - x).norm();
  f.residual_orthogonality = (f.orthogonal.transpose() * f.orthogonal - Mat4::Identity()).norm();
}

inline void fill_membership(PolarFactors& f, const Mat4& m) {
  f.residual_group_membership = {(f.orthogonal.transpose() * m * f.orthogonal - m).norm(),
                                 (f.posdef.transpose() * m * f.posdef - m).norm()};
}

}  // namespace qpolar
