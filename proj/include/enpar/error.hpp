#pragma once

#include <exception>
#include <string>
#include <utility>

namespace enpar {

enum class Err {
  // input / validation
  DanglingEdge,
  EmptySuccessorSet,
  BadDistribution,
  ColorOutOfRange,
  DuplicateEdge,
  BadJumpTable,
  SchemaError,
  IoError,
  ParseError,
  // budgets and truncation limits
  BudgetExceeded,
  Divergence,
  CapLimit,
  CapTooSmallSuspected,
  // internal invariant violations
  UniformityViolated,
  SynthesisGapDetected,
  EnergyTrackOverflow,
  Internal,
};

const char* err_name(Err e);

// Process exit code category: 1 input error, 2 budget/limit, 3 internal.
int err_exit_code(Err e);

class Error : public std::exception {
public:
  Error(Err code, std::string detail) : code_(code), detail_(std::move(detail)) {
    what_ = std::string(err_name(code_)) + ": " + detail_;
  }
  Err code() const { return code_; }
  const std::string& detail() const { return detail_; }
  const char* what() const noexcept override { return what_.c_str(); }

private:
  Err code_;
  std::string detail_;
  std::string what_;
};

[[noreturn]] inline void fail(Err code, std::string detail) {
  throw Error(code, std::move(detail));
}

inline const char* err_name(Err e) {
  switch (e) {
    case Err::DanglingEdge: return "DanglingEdge";
    case Err::EmptySuccessorSet: return "EmptySuccessorSet";
    case Err::BadDistribution: return "BadDistribution";
    case Err::ColorOutOfRange: return "ColorOutOfRange";
    case Err::DuplicateEdge: return "DuplicateEdge";
    case Err::BadJumpTable: return "BadJumpTable";
    case Err::SchemaError: return "SchemaError";
    case Err::IoError: return "IoError";
    case Err::ParseError: return "ParseError";
    case Err::BudgetExceeded: return "BudgetExceeded";
    case Err::Divergence: return "Divergence";
    case Err::CapLimit: return "CapLimit";
    case Err::CapTooSmallSuspected: return "CapTooSmallSuspected";
    case Err::UniformityViolated: return "UniformityViolated";
    case Err::SynthesisGapDetected: return "SynthesisGapDetected";
    case Err::EnergyTrackOverflow: return "EnergyTrackOverflow";
    case Err::Internal: return "Internal";
  }
  return "Unknown";
}

inline int err_exit_code(Err e) {
  switch (e) {
    case Err::DanglingEdge:
    case Err::EmptySuccessorSet:
    case Err::BadDistribution:
    case Err::ColorOutOfRange:
    case Err::DuplicateEdge:
    case Err::BadJumpTable:
    case Err::SchemaError:
    case Err::IoError:
    case Err::ParseError:
      return 1;
    case Err::BudgetExceeded:
    case Err::Divergence:
    case Err::CapLimit:
    case Err::CapTooSmallSuspected:
      return 2;
    default:
      return 3;
  }
}

}  // namespace enpar
