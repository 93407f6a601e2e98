#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace otdr {

// Uniformly sampled intensity trace. Samples are linear power units; dt is the
// sampling interval in seconds. Construction validates: non-empty, finite, dt > 0.
class Trace {
 public:
  Trace(std::vector<double> samples, double dt, std::int64_t origin_index = 0);

  std::span<const double> samples() const noexcept { return samples_; }
  const std::vector<double>& values() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double dt() const noexcept { return dt_; }
  std::int64_t origin_index() const noexcept { return origin_index_; }
  double operator[](std::size_t i) const { return samples_[i]; }

  // Same sampling metadata, new sample values (validated again).
  Trace with_samples(std::vector<double> samples) const;

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  std::vector<double> samples_;
  double dt_;
  std::int64_t origin_index_;
};

// Discrete probe-pulse shape. Taps are rescaled so the largest equals 1.0.
class PulseProfile {
 public:
  // nominal_width <= 0 means "estimate from the taps" (full width at half max).
  PulseProfile(std::vector<double> taps, double dt, double nominal_width = 0.0);

  std::span<const double> taps() const noexcept { return taps_; }
  std::size_t size() const noexcept { return taps_.size(); }
  double dt() const noexcept { return dt_; }
  double nominal_width() const noexcept { return nominal_width_; }
  double tap_sum() const noexcept;

  static PulseProfile impulse(double dt) { return PulseProfile({1.0}, dt, dt); }

  friend bool operator==(const PulseProfile&, const PulseProfile&) = default;

 private:
  std::vector<double> taps_;
  double dt_;
  double nominal_width_;
};

struct FiberParams {
  double refractive_index = 1.468;
  double light_speed = 2.9979e8;
  double attenuation_db_per_km = 0.0;  // one-way

  void validate() const;
};

struct LossEvent {
  std::size_t index;
  double loss_db;
};

struct ReflectionEvent {
  std::size_t index;
  double peak_intensity;
};

using Event = std::variant<LossEvent, ReflectionEvent>;

std::size_t event_index(const Event& e) noexcept;

struct EventList {
  std::vector<Event> events;

  // Indices strictly increasing and < n_samples; loss_db > 0; peak > 0.
  void validate(std::size_t n_samples) const;
};

}  // namespace otdr
