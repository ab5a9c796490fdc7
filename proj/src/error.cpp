#include "twistlab/error.hpp"

namespace twistlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonGeneric: return "NonGeneric";
    case ErrorKind::RankUnexpected: return "RankUnexpected";
    case ErrorKind::SpectraOverlap: return "SpectraOverlap";
    case ErrorKind::SingularLambda: return "SingularLambda";
    case ErrorKind::DegreeZero: return "DegreeZero";
    case ErrorKind::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::PartitionInvalid: return "PartitionInvalid";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::ZeroCountMismatch: return "ZeroCountMismatch";
    case ErrorKind::SumRuleViolated: return "SumRuleViolated";
    case ErrorKind::NullityMismatch: return "NullityMismatch";
    case ErrorKind::UnknownMap: return "UnknownMap";
    case ErrorKind::UnknownR: return "UnknownR";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

bool is_genericity_failure(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonGeneric:
    case ErrorKind::SpectraOverlap:
    case ErrorKind::SingularLambda:
      return true;
    default:
      return false;
  }
}

static std::string decorate(ErrorKind kind, const std::string& message, int step) {
  std::string out{to_string(kind)};
  out += ": ";
  out += message;
  if (step >= 0) out += " (step " + std::to_string(step) + ")";
  return out;
}

Error::Error(ErrorKind kind, const std::string& message, int step)
    : std::runtime_error(decorate(kind, message, step)), kind_(kind), step_(step) {}

}  // namespace twistlab
