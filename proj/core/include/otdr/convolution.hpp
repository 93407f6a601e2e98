#pragma once

#include <span>
#include <vector>

#include "otdr/trace.hpp"

namespace otdr {

// Causal linear convolution truncated to x.size():
//   y[i] = sum_k h[k] * x[i - k],  x[j] = 0 for j < 0.
std::vector<double> convolve_direct(std::span<const double> x, std::span<const double> h);
std::vector<double> convolve_fft(std::span<const double> x, std::span<const double> h);

// Picks the direct sum for short kernels and the FFT path otherwise.
std::vector<double> convolve_samples(std::span<const double> x, std::span<const double> h);

// Forward model of the trace: measured = pulse (*) truth. Requires equal dt.
Trace convolve(const Trace& x, const PulseProfile& h);

}  // namespace otdr
