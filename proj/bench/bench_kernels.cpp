#include <benchmark/benchmark.h>

#include "twistlab/matpoly.hpp"
#include "twistlab/mtheta.hpp"
#include "twistlab/random.hpp"
#include "twistlab/transpositions.hpp"

namespace {

using twistlab::Execution;

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_BraidSamples(benchmark::State& state) {
  const auto map = twistlab::matpoly::pair_map(3);
  for (auto _ : state) {
    auto report = twistlab::verify_braid(map, 64, 7, 1e-8, mode(state));
    benchmark::DoNotOptimize(report.max_residual);
  }
}
BENCHMARK(BM_BraidSamples)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DetGridScan(benchmark::State& state) {
  twistlab::Rng rng(11);
  const auto f = twistlab::mtheta::random_element({0.0, 1.0}, 2, 2, rng);
  for (auto _ : state) {
    auto field = twistlab::mtheta::scan_det_grid(f, 96, mode(state));
    benchmark::DoNotOptimize(field.data());
  }
}
BENCHMARK(BM_DetGridScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ThetaBasis(benchmark::State& state) {
  const twistlab::mtheta::LatticeParams params{{0.2, 0.9}, 3, 1, {0.1, 0.05}};
  for (auto _ : state) {
    twistlab::mtheta::MThetaBasis basis(params, mode(state));
    benchmark::DoNotOptimize(basis.dimension());
  }
}
BENCHMARK(BM_ThetaBasis)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
