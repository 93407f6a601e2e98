#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "otdr/trace.hpp"

namespace otdr::tvd {

enum class Boundary { circular, zero_padded };

struct TvdConfig {
  double lambda = 2e-4;
  int norm_p = 2;  // fidelity norm, 1 or 2
  std::size_t max_iters = 500;
  double tol = 1e-6;  // relative change of the estimate between iterations
  double rho = 2.0;
  Boundary boundary = Boundary::zero_padded;
  std::optional<std::size_t> pad_len;  // zero_padded only; default 2 * pulse taps

  void validate() const;
  std::size_t effective_pad(const PulseProfile& h) const;
};

struct TvdResult {
  Trace estimate;
  std::vector<double> objective_trace;
  std::size_t iterations_used = 0;
  bool converged = false;
};

// Frequency-domain inverse Y conj(H) / (|H|^2 + eps) on a circular grid of
// len(y). With eps == 0 this is the plain spectral division and throws
// DomainError when H has a (numerically) zero bin.
Trace inverse_filter(const Trace& y, const PulseProfile& h, double eps);

// argmin_x  F(Hx - y) + lambda * ||Dx||_1,  F = 1/2 ||.||^2 (p = 2) or ||.||_1 (p = 1).
//
// Solved by ADMM with the splits z = Hx and u = Dx so that the x-update is a
// single diagonal solve in the Fourier domain, z has a closed form per sample
// and u is a soft threshold at lambda / rho. H and D act circularly on the
// working grid.
//
// zero_padded: the grid is [pad zeros | y | pad zeros (+ FFT round-up)]. The
// leading zeros are treated as observations (nothing was launched before the
// trace starts), the trailing block is an unobserved buffer so the end of the
// trace never wraps onto its beginning. The estimate is cropped back to len(y).
TvdResult tv_deconvolve(const Trace& y, const PulseProfile& h, const TvdConfig& cfg = {});

Trace pad_boundary(const Trace& y, std::size_t pad_len);
Trace crop_boundary(const Trace& padded, std::size_t pad_len);

inline double soft_threshold(double v, double t) noexcept {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

// sum_i |x[i+1] - x[i]| (forward difference, no wrap-around row).
double total_variation(std::span<const double> x);

}  // namespace otdr::tvd
