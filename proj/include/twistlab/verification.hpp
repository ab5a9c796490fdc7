#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "twistlab/parallel.hpp"
#include "twistlab/random.hpp"

namespace twistlab {

struct Failure {
  std::size_t sample = 0;
  double residual = 0.0;
  std::string note;  // empty, or the error text when the sample threw
};

/// Outcome of a sampled numerical check. Carries enough to replay any sample:
/// the seed, the per-sample stream index and the largest residual seen.
struct VerificationReport {
  std::string check;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  double max_residual = 0.0;
  std::size_t argmax_sample = 0;
  std::size_t redraws = 0;
  std::vector<Failure> failures;

  bool passed() const { return failures.empty() && max_residual <= tol; }
};

/// Maximum number of redraws per sample when the drawn point is not generic.
inline constexpr int kMaxRedraws = 16;

/// Computes the residual for one sample. It draws its own points from `rng`
/// and signals a non-generic draw by throwing a genericity failure.
using SampleCheck = std::function<double(Rng& rng)>;

VerificationReport run_verification(std::string check, std::size_t samples, std::uint64_t seed,
                                    double tol, const SampleCheck& fn,
                                    Execution exec = Execution::Parallel);

/// Merges several reports into one named check; residuals and failures are
/// combined, sample indices keep their meaning.
VerificationReport merge_reports(std::string check, const std::vector<VerificationReport>& parts);

}  // namespace twistlab
