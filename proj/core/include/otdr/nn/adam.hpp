#pragma once

#include <cstdint>
#include <span>

#include "otdr/nn/network.hpp"

namespace otdr::nn {

struct AdamConfig {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename T>
struct AdamState {
  Network<T> first_moment;
  Network<T> second_moment;
  std::uint64_t step = 0;
};

template <typename T>
AdamState<T> make_adam_state(const Network<T>& net) {
  return {zeros_like(net), zeros_like(net), 0};
}

// One bias-corrected Adam update of a flat parameter block; `step` is the
// already-incremented step count t >= 1.
template <typename T>
void adam_update(std::span<T> params, std::span<const T> grads, std::span<T> m, std::span<T> v,
                 std::uint64_t step, const AdamConfig& cfg);

// Updates every trainable tensor of params and increments state.step.
template <typename T>
void adam_step(Network<T>& params, Network<T>& grads, AdamState<T>& state, const AdamConfig& cfg);

}  // namespace otdr::nn
