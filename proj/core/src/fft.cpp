#include "otdr/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "otdr/error.hpp"

namespace otdr {

namespace {

// FFTW's planner is not reentrant; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_smooth(std::size_t n) {
  for (std::size_t p : {2u, 3u, 5u, 7u}) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

}  // namespace

std::size_t fast_fft_size(std::size_t n) {
  if (n <= 1) return 1;
  while (!is_smooth(n)) ++n;
  return n;
}

struct RealFft::Impl {
  double* real = nullptr;
  fftw_complex* spectrum = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
    fftw_free(real);
    fftw_free(spectrum);
  }
};

RealFft::RealFft(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n == 0) throw DomainError("FFT length must be positive");
  const int len = static_cast<int>(n);
  std::lock_guard lock(planner_mutex());
  impl_->real = fftw_alloc_real(n);
  impl_->spectrum = fftw_alloc_complex(n / 2 + 1);
  impl_->fwd = fftw_plan_dft_r2c_1d(len, impl_->real, impl_->spectrum, FFTW_ESTIMATE);
  impl_->inv = fftw_plan_dft_c2r_1d(len, impl_->spectrum, impl_->real, FFTW_ESTIMATE);
  if (!impl_->fwd || !impl_->inv) throw ConfigError("FFTW could not create a plan");
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  if (in.size() > n_ || out.size() != spectrum_size()) throw ConfigError("FFT buffer size mismatch");
  std::copy(in.begin(), in.end(), impl_->real);
  std::fill(impl_->real + in.size(), impl_->real + n_, 0.0);
  fftw_execute(impl_->fwd);
  const auto* spec = reinterpret_cast<const std::complex<double>*>(impl_->spectrum);
  std::copy(spec, spec + out.size(), out.begin());
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  if (in.size() != spectrum_size() || out.size() != n_) throw ConfigError("FFT buffer size mismatch");
  std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(impl_->spectrum));
  fftw_execute(impl_->inv);  // c2r destroys its input, which is our scratch copy
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = impl_->real[i] * scale;
}

}  // namespace otdr
