#pragma once

#include <stdexcept>
#include <string>

namespace vb {

enum class ErrorCode {
  DivisionByZero,
  PoleAtEvaluationPoint,
  GammaPole,
  SelectionRuleViolation,
  NotAdmissible,
  SingularBasis,
  IndicialDenominatorZero,
  TruncationUnderflow,
  DomainViolation,
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::PoleAtEvaluationPoint: return "PoleAtEvaluationPoint";
    case ErrorCode::GammaPole: return "GammaPole";
    case ErrorCode::SelectionRuleViolation: return "SelectionRuleViolation";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::SingularBasis: return "SingularBasis";
    case ErrorCode::IndicialDenominatorZero: return "IndicialDenominatorZero";
    case ErrorCode::TruncationUnderflow: return "TruncationUnderflow";
    case ErrorCode::DomainViolation: return "DomainViolation";
  }
  return "Unknown";
}

// Every failure the library reports on purpose is an Error; anything else
// escaping (std::logic_error, bad_alloc) is a bug or an environment problem.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vb
