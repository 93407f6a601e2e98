#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace otdr {

// Smallest n' >= n whose prime factors are all in {2, 3, 5, 7}.
std::size_t fast_fft_size(std::size_t n);

// Real-to-complex FFT of a fixed length backed by FFTW. Each instance owns its
// plans and work buffers, so one instance must not be used from two threads at
// once; separate instances are independent.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  // in.size() <= n (zero-extended); out.size() == spectrum_size().
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  // Normalized inverse: inverse(forward(x)) == x. out.size() == n.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace otdr
