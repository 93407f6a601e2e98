#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "otdr/trace.hpp"

namespace otdr {

// x + n with n ~ N(0, sigma^2) i.i.d.; sigma == 0 returns x unchanged.
Trace add_gaussian_noise(const Trace& x, double sigma, std::uint64_t seed);

// Trapezoid of round(width/dt) taps with linear edges of
// round(rise_fraction * taps) samples each side, peak 1.0.
PulseProfile parametric_pulse(double width, double rise_fraction, double dt);

struct ScenarioTraces {
  Trace truth;
  Trace measured;
};

// Backscatter baseline I0 * 10^(-2 alpha z / 10) (two-way loss on the trace),
// multiplicative drops at loss events, single-sample levels at reflections;
// measured = convolve(truth, pulse) + noise.
ScenarioTraces synth_scenario_trace(std::size_t n_samples, double initial_intensity,
                                    const FiberParams& fiber, const EventList& events,
                                    const PulseProfile& pulse, double noise_sigma,
                                    std::uint64_t seed);

// Intensity ratio across a drop of loss_db on the trace.
inline double db_to_linear_loss(double loss_db) noexcept {
  return std::pow(10.0, -loss_db / 10.0);
}

}  // namespace otdr
