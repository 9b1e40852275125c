#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace demigron {

enum class ErrorCode {
  InvalidSpec,
  Overflow,
  NonPositiveThreshold,
  EmptyFamily,
  DegenerateBatch,
  NotNondecreasing,
  NegativeBase,
  NonzeroStart,
  POutOfRange,
  NegativeG,
  HolderViolation,
  ShapeMismatch,
  NegativeInput,
  HypothesisViolated,
  BetaOutOfRange,
  FormMismatch,
  NoConvergence,
  AlphaOutOfRange,
  NonConvergence,
  StepTooLarge,
  StepBoundViolation,
  HGridViolation,
  ConfigError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NonPositiveThreshold: return "NonPositiveThreshold";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::DegenerateBatch: return "DegenerateBatch";
    case ErrorCode::NotNondecreasing: return "NotNondecreasing";
    case ErrorCode::NegativeBase: return "NegativeBase";
    case ErrorCode::NonzeroStart: return "NonzeroStart";
    case ErrorCode::POutOfRange: return "POutOfRange";
    case ErrorCode::NegativeG: return "NegativeG";
    case ErrorCode::HolderViolation: return "HolderViolation";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NegativeInput: return "NegativeInput";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::BetaOutOfRange: return "BetaOutOfRange";
    case ErrorCode::FormMismatch: return "FormMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::StepBoundViolation: return "StepBoundViolation";
    case ErrorCode::HGridViolation: return "HGridViolation";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable error code; what() is "<Code>: <message>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace demigron
