#include "otdr/nn/adam.hpp"

#include <cmath>

#include "otdr/error.hpp"

namespace otdr::nn {

template <typename T>
void adam_update(std::span<T> params, std::span<const T> grads, std::span<T> m, std::span<T> v,
                 std::uint64_t step, const AdamConfig& cfg) {
  if (grads.size() != params.size() || m.size() != params.size() || v.size() != params.size()) {
    throw ConfigError("adam: parameter, gradient and moment sizes differ");
  }
  const double t = static_cast<double>(step);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  const auto b1 = static_cast<T>(cfg.beta1);
  const auto b2 = static_cast<T>(cfg.beta2);
  const auto lr_t = static_cast<T>(cfg.learning_rate / bc1);
  const auto inv_bc2 = static_cast<T>(1.0 / bc2);
  const auto eps = static_cast<T>(cfg.eps);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const T g = grads[i];
    m[i] = b1 * m[i] + (T(1) - b1) * g;
    v[i] = b2 * v[i] + (T(1) - b2) * g * g;
    params[i] -= lr_t * m[i] / (std::sqrt(v[i] * inv_bc2) + eps);
  }
}

template <typename T>
void adam_step(Network<T>& params, Network<T>& grads, AdamState<T>& state, const AdamConfig& cfg) {
  auto p = parameter_views(params);
  auto g = parameter_views(grads);
  auto m = parameter_views(state.first_moment);
  auto v = parameter_views(state.second_moment);
  if (p.size() != g.size() || p.size() != m.size() || p.size() != v.size()) {
    throw ConfigError("adam: network structures differ");
  }
  ++state.step;
  for (std::size_t i = 0; i < p.size(); ++i) {
    adam_update<T>(p[i].values, std::span<const T>(g[i].values), m[i].values, v[i].values, state.step, cfg);
  }
}

template void adam_update<float>(std::span<float>, std::span<const float>, std::span<float>, std::span<float>,
                                 std::uint64_t, const AdamConfig&);
template void adam_update<double>(std::span<double>, std::span<const double>, std::span<double>,
                                  std::span<double>, std::uint64_t, const AdamConfig&);
template void adam_step<float>(Network<float>&, Network<float>&, AdamState<float>&, const AdamConfig&);
template void adam_step<double>(Network<double>&, Network<double>&, AdamState<double>&, const AdamConfig&);

}  // namespace otdr::nn
