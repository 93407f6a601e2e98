#include "otdr/physics.hpp"

#include "otdr/error.hpp"

namespace otdr {

double time_to_distance(double seconds, const FiberParams& fiber) {
  fiber.validate();
  if (seconds < 0.0) throw DomainError("time of flight must be non-negative");
  return fiber.light_speed * seconds / (2.0 * fiber.refractive_index);
}

double spatial_resolution(double pulse_width, const FiberParams& fiber) {
  if (!(pulse_width > 0.0)) throw DomainError("pulse width must be positive");
  return time_to_distance(pulse_width, fiber);
}

}  // namespace otdr
