#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twistlab {

enum class ErrorKind {
  NonGeneric,
  RankUnexpected,
  SpectraOverlap,
  SingularLambda,
  DegreeZero,
  ResidualTooLarge,
  SizeMismatch,
  PartitionInvalid,
  DimensionMismatch,
  ConvergenceFailure,
  ZeroCountMismatch,
  SumRuleViolated,
  NullityMismatch,
  UnknownMap,
  UnknownR,
  VerificationFailed,
  SchemaError,
  Usage,
};

std::string_view to_string(ErrorKind kind);

/// Failures that mean "the input is not generic enough"; samplers redraw on these.
bool is_genericity_failure(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, int step = -1);

  ErrorKind kind() const noexcept { return kind_; }
  // Index of the elementary step that failed inside a word action, -1 otherwise.
  int step() const noexcept { return step_; }

 private:
  ErrorKind kind_;
  int step_;
};

}  // namespace twistlab
