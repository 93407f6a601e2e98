#include "otdr/convolution.hpp"

#include <algorithm>
#include <complex>

#include "otdr/error.hpp"
#include "otdr/fft.hpp"

namespace otdr {

std::vector<double> convolve_direct(std::span<const double> x, std::span<const double> h) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t kmax = std::min(h.size(), i + 1);
    double acc = 0.0;
    for (std::size_t k = 0; k < kmax; ++k) acc += h[k] * x[i - k];
    y[i] = acc;
  }
  return y;
}

std::vector<double> convolve_fft(std::span<const double> x, std::span<const double> h) {
  if (x.empty() || h.empty()) return std::vector<double>(x.size(), 0.0);
  const std::size_t n = fast_fft_size(x.size() + h.size() - 1);
  RealFft fft(n);
  std::vector<std::complex<double>> xs(fft.spectrum_size()), hs(fft.spectrum_size());
  fft.forward(x, xs);
  fft.forward(h.first(std::min(h.size(), n)), hs);
  for (std::size_t f = 0; f < xs.size(); ++f) xs[f] *= hs[f];
  std::vector<double> full(n);
  fft.inverse(xs, full);
  full.resize(x.size());
  return full;
}

std::vector<double> convolve_samples(std::span<const double> x, std::span<const double> h) {
  // Below ~32 taps the direct sum beats two FFTs of length N + K.
  if (h.size() < 32 || x.size() < 256) return convolve_direct(x, h);
  return convolve_fft(x, h);
}

Trace convolve(const Trace& x, const PulseProfile& h) {
  const double rel = std::abs(x.dt() - h.dt()) / std::max(x.dt(), h.dt());
  if (rel > 1e-9) throw ConfigError("trace and pulse sampling intervals differ");
  return x.with_samples(convolve_samples(x.samples(), h.taps()));
}

}  // namespace otdr
