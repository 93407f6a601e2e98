#include <benchmark/benchmark.h>

#include "otdr/scenario.hpp"
#include "otdr/tvd.hpp"

namespace {

void BM_TvDeconvolveFig7(benchmark::State& state) {
  const auto d = otdr::scenario::build(otdr::scenario::Name::fig7, 1);
  otdr::tvd::TvdConfig cfg;
  cfg.max_iters = static_cast<std::size_t>(state.range(0));
  cfg.tol = 1e-300;  // run every iteration
  for (auto _ : state) benchmark::DoNotOptimize(otdr::tvd::tv_deconvolve(d.measured, d.pulse, cfg));
  state.counters["iters"] = static_cast<double>(cfg.max_iters);
}

void BM_InverseFilter(benchmark::State& state) {
  const auto d = otdr::scenario::build(otdr::scenario::Name::fig7, 1);
  for (auto _ : state) benchmark::DoNotOptimize(otdr::tvd::inverse_filter(d.measured, d.pulse, 1e-3));
}

}  // namespace

BENCHMARK(BM_TvDeconvolveFig7)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InverseFilter)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
