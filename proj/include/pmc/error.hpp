#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmc {

enum class ErrorCode {
  ParseError,
  InvalidAlphabet,
  UnknownLabel,
  NegativeProbability,
  RowMassExceedsOne,
  DuplicateEntry,
  TypeMismatch,
  BadSplit,
  IllTyped,
  UnknownKernel,
  NonTotalGenerator,
  NonTotalEvidence,
  ImpossibleEvidence,
  InvalidProblem,
  UnknownAction,
  UndefinedUtility,
  NoFeasibleAction,
  BadParameter,
  BadDensity,
  UnknownLaw,
  UnknownProblem,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidAlphabet: return "InvalidAlphabet";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::RowMassExceedsOne: return "RowMassExceedsOne";
    case ErrorCode::DuplicateEntry: return "DuplicateEntry";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::BadSplit: return "BadSplit";
    case ErrorCode::IllTyped: return "IllTyped";
    case ErrorCode::UnknownKernel: return "UnknownKernel";
    case ErrorCode::NonTotalGenerator: return "NonTotalGenerator";
    case ErrorCode::NonTotalEvidence: return "NonTotalEvidence";
    case ErrorCode::ImpossibleEvidence: return "ImpossibleEvidence";
    case ErrorCode::InvalidProblem: return "InvalidProblem";
    case ErrorCode::UnknownAction: return "UnknownAction";
    case ErrorCode::UndefinedUtility: return "UndefinedUtility";
    case ErrorCode::NoFeasibleAction: return "NoFeasibleAction";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::BadDensity: return "BadDensity";
    case ErrorCode::UnknownLaw: return "UnknownLaw";
    case ErrorCode::UnknownProblem: return "UnknownProblem";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Inference is undefined (as opposed to the input being malformed).
inline bool is_inference_undefined(ErrorCode code) {
  return code == ErrorCode::ImpossibleEvidence ||
         code == ErrorCode::NoFeasibleAction ||
         code == ErrorCode::UndefinedUtility;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pmc
