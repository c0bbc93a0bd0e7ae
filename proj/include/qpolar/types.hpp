#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qpolar {

using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using MatX = Eigen::MatrixXd;
using Complex = std::complex<double>;
using CMat2 = Eigen::Matrix2cd;

enum class ErrorCode {
  NotSymmetric,
  NotPSD,
  NotPD,
  NotSpecialOrthogonal,
  DimensionMismatch,
  UnsupportedForm,
  NotInGroup,
  DegenerateBlock,
  HyperbolicConstraintViolated,
  NotPDInGroup,
  InternalConsistency,
  NoSolution,
  NotOrthogonalInGroup,
  NotSymmetricRep,
  NotUnitDeterminant,
  NoPositiveBranch,
  Singular,
  NoConvergence,
  ParseError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotPD: return "NotPD";
    case ErrorCode::NotSpecialOrthogonal: return "NotSpecialOrthogonal";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnsupportedForm: return "UnsupportedForm";
    case ErrorCode::NotInGroup: return "NotInGroup";
    case ErrorCode::DegenerateBlock: return "DegenerateBlock";
    case ErrorCode::HyperbolicConstraintViolated: return "HyperbolicConstraintViolated";
    case ErrorCode::NotPDInGroup: return "NotPDInGroup";
    case ErrorCode::InternalConsistency: return "InternalConsistency";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::NotOrthogonalInGroup: return "NotOrthogonalInGroup";
    case ErrorCode::NotSymmetricRep: return "NotSymmetricRep";
    case ErrorCode::NotUnitDeterminant: return "NotUnitDeterminant";
    case ErrorCode::NoPositiveBranch: return "NoPositiveBranch";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable code; `what()` holds "Code: detail".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

namespace detail {

template <typename Derived>
double fro(const Eigen::MatrixBase<Derived>& m) {
  return m.norm();
}

inline double scale_of(double norm) { return norm > 1.0 ? norm : 1.0; }

}  // namespace detail

}  // namespace qpolar
