#include "twistlab/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twistlab/error.hpp"

namespace twistlab {

namespace {

struct SampleOutcome {
  double residual = 0.0;
  std::size_t redraws = 0;
  std::string note;
};

SampleOutcome run_sample(std::uint64_t seed, std::size_t index, const SampleCheck& fn) {
  Rng rng(mix_seed(seed, index));
  SampleOutcome out;
  for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
    try {
      out.residual = fn(rng);
      if (std::isnan(out.residual)) out.residual = std::numeric_limits<double>::infinity();
      return out;
    } catch (const Error& e) {
      if (!is_genericity_failure(e.kind())) {
        out.residual = std::numeric_limits<double>::infinity();
        out.note = e.what();
        return out;
      }
      ++out.redraws;
    }
  }
  throw Error(ErrorKind::NonGeneric,
              "sample " + std::to_string(index) + " stayed non-generic after " +
                  std::to_string(kMaxRedraws) + " redraws");
}

}  // namespace

VerificationReport run_verification(std::string check, std::size_t samples, std::uint64_t seed,
                                    double tol, const SampleCheck& fn, Execution exec) {
  std::vector<SampleOutcome> outcomes(samples);
  for_each_index(
      samples, [&](std::size_t i) { outcomes[i] = run_sample(seed, i, fn); }, exec);

  VerificationReport report;
  report.check = std::move(check);
  report.samples = samples;
  report.seed = seed;
  report.tol = tol;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto& o = outcomes[i];
    report.redraws += o.redraws;
    if (o.residual > report.max_residual || (i == 0 && o.residual >= report.max_residual)) {
      report.max_residual = o.residual;
      report.argmax_sample = i;
    }
    if (!(o.residual <= tol) || !o.note.empty()) report.failures.push_back({i, o.residual, o.note});
  }
  return report;
}

VerificationReport merge_reports(std::string check, const std::vector<VerificationReport>& parts) {
  VerificationReport out;
  out.check = std::move(check);
  bool first = true;
  for (const auto& p : parts) {
    if (first) {
      out.seed = p.seed;
      out.tol = p.tol;
      first = false;
    }
    out.samples = std::max(out.samples, p.samples);
    out.tol = std::max(out.tol, p.tol);
    out.redraws += p.redraws;
    if (p.max_residual > out.max_residual) {
      out.max_residual = p.max_residual;
      out.argmax_sample = p.argmax_sample;
    }
    for (auto f : p.failures) {
      f.note = p.check + (f.note.empty() ? "" : ": " + f.note);
      out.failures.push_back(std::move(f));
    }
  }
  std::stable_sort(out.failures.begin(), out.failures.end(),
                   [](const Failure& a, const Failure& b) { return a.sample < b.sample; });
  return out;
}

}  // namespace twistlab
