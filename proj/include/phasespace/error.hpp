#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phasespace {

enum class ErrorCode {
  InvalidArgument,
  GridTooSmall,
  NotPeriodic,
  AliasingDetected,
  GridMismatch,
  TruncationTooSevere,
  DegreeOverflow,
  BandwidthExceeded,
  NonConvergent,
  StabilityViolation,
  TruncationOverflow,
  QuadratureDivergence,
  NonHermitian,
  FormalismMismatch,
  IncommensurateMomentum,
  UnsupportedState,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::NotPeriodic: return "NotPeriodic";
    case ErrorCode::AliasingDetected: return "AliasingDetected";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::TruncationTooSevere: return "TruncationTooSevere";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::BandwidthExceeded: return "BandwidthExceeded";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::StabilityViolation: return "StabilityViolation";
    case ErrorCode::TruncationOverflow: return "TruncationOverflow";
    case ErrorCode::QuadratureDivergence: return "QuadratureDivergence";
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::FormalismMismatch: return "FormalismMismatch";
    case ErrorCode::IncommensurateMomentum: return "IncommensurateMomentum";
    case ErrorCode::UnsupportedState: return "UnsupportedState";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace phasespace
