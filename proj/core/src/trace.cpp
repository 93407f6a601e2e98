#include "otdr/trace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "otdr/error.hpp"

namespace otdr {

Trace::Trace(std::vector<double> samples, double dt, std::int64_t origin_index)
    : samples_(std::move(samples)), dt_(dt), origin_index_(origin_index) {
  if (samples_.empty()) throw DomainError("trace must contain at least one sample");
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw DomainError("trace dt must be positive");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw DomainError("trace sample " + std::to_string(i) + " is not finite");
    }
  }
}

Trace Trace::with_samples(std::vector<double> samples) const {
  return Trace(std::move(samples), dt_, origin_index_);
}

PulseProfile::PulseProfile(std::vector<double> taps, double dt, double nominal_width)
    : taps_(std::move(taps)), dt_(dt), nominal_width_(nominal_width) {
  if (taps_.empty()) throw DomainError("pulse profile needs at least one tap");
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw DomainError("pulse dt must be positive");
  double peak = 0.0;
  for (double t : taps_) {
    if (!std::isfinite(t)) throw DomainError("pulse taps must be finite");
    peak = std::max(peak, t);
  }
  if (!(peak > 0.0)) throw DomainError("pulse needs at least one positive tap");
  for (double& t : taps_) t /= peak;
  if (!(nominal_width_ > 0.0)) {
    const auto half = std::count_if(taps_.begin(), taps_.end(), [](double t) { return t >= 0.5; });
    nominal_width_ = static_cast<double>(half) * dt_;
  }
}

double PulseProfile::tap_sum() const noexcept {
  return std::accumulate(taps_.begin(), taps_.end(), 0.0);
}

void FiberParams::validate() const {
  if (!(refractive_index > 1.0)) throw DomainError("refractive index must exceed 1");
  if (!(light_speed > 0.0)) throw DomainError("light speed must be positive");
  if (!(attenuation_db_per_km >= 0.0)) throw DomainError("attenuation must be non-negative");
}

std::size_t event_index(const Event& e) noexcept {
  return std::visit([](const auto& ev) { return ev.index; }, e);
}

void EventList::validate(std::size_t n_samples) const {
  bool first = true;
  std::size_t prev = 0;
  for (const auto& e : events) {
    const std::size_t idx = event_index(e);
    if (idx >= n_samples) {
      throw DomainError("event index " + std::to_string(idx) + " outside trace of " +
                        std::to_string(n_samples) + " samples");
    }
    if (!first && idx <= prev) throw DomainError("event indices must be strictly increasing");
    if (const auto* loss = std::get_if<LossEvent>(&e); loss && !(loss->loss_db > 0.0)) {
      throw DomainError("loss event must have loss_db > 0");
    }
    if (const auto* refl = std::get_if<ReflectionEvent>(&e); refl && !(refl->peak_intensity > 0.0)) {
      throw DomainError("reflection event must have peak_intensity > 0");
    }
    prev = idx;
    first = false;
  }
}

}  // namespace otdr
