#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncho {

enum class ErrorCode {
  NotHermitian,
  NotPositiveDefinite,
  NonPositiveAlpha,
  ZeroDimension,
  ParityMismatch,
  ConvergenceFailure,
  TruncationBudgetExceeded,
  NotCommutative,
  SingularDenominator,
  OffManifold,
  InconsistentSystem,
  OutsideRegion,
  OutOfInterval,
  InfeasibleFamilyPoint,
  NotFound,
  SingularEncountered,
  BudgetExceeded,
  ParseError,
  IoError,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorCode::ZeroDimension: return "ZeroDimension";
    case ErrorCode::ParityMismatch: return "ParityMismatch";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::TruncationBudgetExceeded: return "TruncationBudgetExceeded";
    case ErrorCode::NotCommutative: return "NotCommutative";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::OffManifold: return "OffManifold";
    case ErrorCode::InconsistentSystem: return "InconsistentSystem";
    case ErrorCode::OutsideRegion: return "OutsideRegion";
    case ErrorCode::OutOfInterval: return "OutOfInterval";
    case ErrorCode::InfeasibleFamilyPoint: return "InfeasibleFamilyPoint";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::SingularEncountered: return "SingularEncountered";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Errors that reflect bad user input or a parameter point outside the
/// domain of an operation, as opposed to numerical or internal failures.
constexpr bool is_domain_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian:
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::NonPositiveAlpha:
    case ErrorCode::ZeroDimension:
    case ErrorCode::ParityMismatch:
    case ErrorCode::NotCommutative:
    case ErrorCode::OffManifold:
    case ErrorCode::OutsideRegion:
    case ErrorCode::OutOfInterval:
    case ErrorCode::InfeasibleFamilyPoint:
    case ErrorCode::ParseError:
    case ErrorCode::InvalidArgument:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ncho
