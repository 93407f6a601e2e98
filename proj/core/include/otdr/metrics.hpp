#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace otdr {

template <typename A, typename B>
double mean_squared_error(std::span<const A> estimate, std::span<const B> label) {
  double acc = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double d = static_cast<double>(estimate[i]) - static_cast<double>(label[i]);
    acc += d * d;
  }
  return acc / static_cast<double>(estimate.size());
}

// 10 log10(peak^2 / MSE); +inf when the estimate is exact.
inline double psnr_from_mse(double mse, double peak) {
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

}  // namespace otdr
