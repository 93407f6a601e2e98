#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "otdr/convolution.hpp"

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(g);
  return v;
}

// args: trace length, kernel length
void BM_ConvolveDirect(benchmark::State& state) {
  const auto x = random_vector(static_cast<std::size_t>(state.range(0)), 1);
  const auto h = random_vector(static_cast<std::size_t>(state.range(1)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(otdr::convolve_direct(x, h));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ConvolveFft(benchmark::State& state) {
  const auto x = random_vector(static_cast<std::size_t>(state.range(0)), 1);
  const auto h = random_vector(static_cast<std::size_t>(state.range(1)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(otdr::convolve_fft(x, h));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (long n : {2000L, 20000L}) {
    for (long k : {10L, 64L, 512L}) b->Args({n, k});
  }
}

}  // namespace

BENCHMARK(BM_ConvolveDirect)->Apply(sizes);
BENCHMARK(BM_ConvolveFft)->Apply(sizes);
BENCHMARK_MAIN();
