#include <random>

#include <benchmark/benchmark.h>

#include "otdr/nn/layers.hpp"
#include "otdr/nn/network.hpp"

namespace {

using otdr::nn::Matrix;

Matrix<float> random_input(Eigen::Index rows, Eigen::Index cols) {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  Matrix<float> m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(g);
  return m;
}

// args: channels, length
void BM_Conv1dForward(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto len = static_cast<std::size_t>(state.range(1));
  otdr::nn::Conv1d<float> conv(c, c, 9);
  conv.weight.setConstant(0.01f);
  const auto x = random_input(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(len));
  for (auto _ : state) benchmark::DoNotOptimize(otdr::nn::conv1d_forward(conv, x, len));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(c * c * 9 * len));
}

void BM_Conv1dBackward(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto len = static_cast<std::size_t>(state.range(1));
  otdr::nn::Conv1d<float> conv(c, c, 9), grad(c, c, 9);
  conv.weight.setConstant(0.01f);
  const auto x = random_input(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(len));
  const auto dy = random_input(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(len));
  for (auto _ : state) benchmark::DoNotOptimize(otdr::nn::conv1d_backward(conv, x, len, dy, grad));
}

// args: resblocks, channels; one 2000-sample trace
void BM_NetworkInfer(benchmark::State& state) {
  const otdr::nn::NetArchitecture arch{static_cast<std::size_t>(state.range(0)),
                                       static_cast<std::size_t>(state.range(1)), 9, false};
  const auto net = otdr::nn::make_network<float>(arch, 1);
  const auto x = random_input(1, 2000);
  const std::span<const float> trace(x.data(), 2000);
  for (auto _ : state) benchmark::DoNotOptimize(otdr::nn::infer<float>(net, trace));
}

// one training step (forward, backward) of the desk configuration
void BM_TrainStep(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  auto net = otdr::nn::make_network<float>({3, 32, 9, false}, 1);
  const auto x = random_input(1, static_cast<Eigen::Index>(batch * 2000));
  const auto label = random_input(1, static_cast<Eigen::Index>(batch * 2000));
  for (auto _ : state) {
    otdr::nn::ForwardCache<float> cache;
    const auto y = otdr::nn::forward(net, x, 2000, otdr::nn::Mode::train, &cache);
    Matrix<float> dy;
    otdr::nn::mse_loss(y, label, &dy);
    benchmark::DoNotOptimize(otdr::nn::backward(net, cache, dy));
  }
}

}  // namespace

BENCHMARK(BM_Conv1dForward)->Args({32, 2000})->Args({128, 2000})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Conv1dBackward)->Args({32, 2000})->Args({128, 2000})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_NetworkInfer)->Args({3, 32})->Args({11, 128})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainStep)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
