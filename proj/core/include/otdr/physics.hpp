#pragma once

#include "otdr/trace.hpp"

namespace otdr {

// Round-trip time of flight to fiber position: L = c t / (2 n).
double time_to_distance(double seconds, const FiberParams& fiber);

// Two-point resolution set by the pulse width: SR = c tau / (2 n).
double spatial_resolution(double pulse_width, const FiberParams& fiber);

// Fiber length covered by one sample of a trace sampled at dt.
inline double sample_spacing(double dt, const FiberParams& fiber) {
  return time_to_distance(dt, fiber);
}

}  // namespace otdr
