#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace schwinger {

enum class ErrorCode {
  kConfig,
  kInvalidArgument,
  kCriticalCouplingExceeded,
  kDegeneracy,
  kStepSizeTooLarge,
  kNonPhysicalState,
  kDivisionHazard,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kCriticalCouplingExceeded: return "critical_coupling_exceeded";
    case ErrorCode::kDegeneracy: return "degeneracy";
    case ErrorCode::kStepSizeTooLarge: return "step_size_too_large";
    case ErrorCode::kNonPhysicalState: return "non_physical_state";
    case ErrorCode::kDivisionHazard: return "division_hazard";
  }
  return "unknown";
}

/// Configuration and argument problems are user errors; everything else is a
/// numerical failure of the model at the requested parameters.
constexpr bool is_numeric_failure(ErrorCode code) {
  return code != ErrorCode::kConfig && code != ErrorCode::kInvalidArgument;
}

class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace schwinger
