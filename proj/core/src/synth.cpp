#include "otdr/synth.hpp"

#include <cmath>
#include <random>

#include "otdr/convolution.hpp"
#include "otdr/error.hpp"
#include "otdr/physics.hpp"
#include "otdr/rng.hpp"

namespace otdr {

Trace add_gaussian_noise(const Trace& x, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw DomainError("noise sigma must be non-negative");
  if (sigma == 0.0) return x;
  Rng rng = make_rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<double> out(x.values());
  for (double& v : out) v += noise(rng);
  return x.with_samples(std::move(out));
}

PulseProfile parametric_pulse(double width, double rise_fraction, double dt) {
  if (!(dt > 0.0)) throw DomainError("pulse dt must be positive");
  if (!(width >= dt * (1.0 - 1e-9))) throw DomainError("pulse width must be at least one sample");
  if (!(rise_fraction >= 0.0 && rise_fraction < 0.5)) {
    throw DomainError("rise fraction must lie in [0, 0.5)");
  }
  const auto n = static_cast<std::size_t>(std::llround(width / dt));
  const auto edge = static_cast<std::size_t>(std::llround(rise_fraction * static_cast<double>(n)));
  std::vector<double> taps(n, 1.0);
  const double step = 1.0 / static_cast<double>(edge + 1);
  for (std::size_t j = 0; j < edge; ++j) {
    taps[j] = static_cast<double>(j + 1) * step;
    taps[n - 1 - j] = static_cast<double>(j + 1) * step;
  }
  return PulseProfile(std::move(taps), dt, width);
}

ScenarioTraces synth_scenario_trace(std::size_t n_samples, double initial_intensity,
                                    const FiberParams& fiber, const EventList& events,
                                    const PulseProfile& pulse, double noise_sigma,
                                    std::uint64_t seed) {
  fiber.validate();
  if (n_samples == 0) throw DomainError("scenario needs at least one sample");
  if (!(initial_intensity > 0.0)) throw DomainError("initial intensity must be positive");
  events.validate(n_samples);

  const double dt = pulse.dt();
  const double spacing_km = sample_spacing(dt, fiber) / 1000.0;
  std::vector<double> truth(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double z_km = static_cast<double>(i) * spacing_km;
    truth[i] = initial_intensity * std::pow(10.0, -2.0 * fiber.attenuation_db_per_km * z_km / 10.0);
  }
  double factor = 1.0;
  std::size_t cursor = 0;
  auto apply_factor_until = [&](std::size_t end) {
    for (; cursor < end; ++cursor) truth[cursor] *= factor;
  };
  std::vector<std::pair<std::size_t, double>> reflections;
  for (const auto& e : events.events) {
    if (const auto* loss = std::get_if<LossEvent>(&e)) {
      apply_factor_until(loss->index);
      factor *= db_to_linear_loss(loss->loss_db);
    } else {
      const auto& refl = std::get<ReflectionEvent>(e);
      reflections.emplace_back(refl.index, refl.peak_intensity);
    }
  }
  apply_factor_until(n_samples);
  for (const auto& [idx, peak] : reflections) truth[idx] = peak;

  Trace clean(std::move(truth), dt);
  Trace measured = add_gaussian_noise(convolve(clean, pulse), noise_sigma, seed);
  return {std::move(clean), std::move(measured)};
}

}  // namespace otdr
