#include "otdr/tvd.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "otdr/error.hpp"
#include "otdr/fft.hpp"

namespace otdr::tvd {

namespace {

using cplx = std::complex<double>;

void check_dt(const Trace& y, const PulseProfile& h) {
  if (std::abs(y.dt() - h.dt()) > 1e-9 * std::max(y.dt(), h.dt())) {
    throw ConfigError("trace and pulse sampling intervals differ");
  }
  if (y.size() < h.size()) throw DomainError("trace is shorter than the pulse");
}

// Frequency response of the circular forward difference (Dx)[i] = x[i+1] - x[i].
std::vector<cplx> difference_spectrum(std::size_t n) {
  std::vector<cplx> d(n / 2 + 1);
  for (std::size_t f = 0; f < d.size(); ++f) {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(f) / static_cast<double>(n);
    d[f] = cplx(std::cos(w) - 1.0, std::sin(w));
  }
  return d;
}

void circular_diff(std::span<const double> x, std::span<double> out) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i + 1 < n; ++i) out[i] = x[i + 1] - x[i];
  out[n - 1] = x[0] - x[n - 1];
}

}  // namespace

void TvdConfig::validate() const {
  if (!(lambda >= 0.0)) throw DomainError("lambda must be non-negative");
  if (norm_p != 1 && norm_p != 2) throw DomainError("fidelity norm must be 1 or 2");
  if (max_iters < 1) throw DomainError("max_iters must be at least 1");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
}

std::size_t TvdConfig::effective_pad(const PulseProfile& h) const {
  if (boundary == Boundary::circular) return 0;
  return pad_len.value_or(2 * h.size());
}

Trace inverse_filter(const Trace& y, const PulseProfile& h, double eps) {
  check_dt(y, h);
  if (!(eps >= 0.0)) throw DomainError("inverse filter eps must be non-negative");
  const std::size_t n = y.size();
  RealFft fft(n);
  std::vector<cplx> ys(fft.spectrum_size()), hs(fft.spectrum_size());
  fft.forward(y.samples(), ys);
  fft.forward(h.taps(), hs);
  double hmax = 0.0;
  for (const auto& v : hs) hmax = std::max(hmax, std::abs(v));
  for (std::size_t f = 0; f < hs.size(); ++f) {
    const double mag2 = std::norm(hs[f]);
    if (eps == 0.0 && std::sqrt(mag2) <= 1e-12 * hmax) {
      throw DomainError("pulse spectrum has a zero at bin " + std::to_string(f) +
                        "; the unregularized inverse is singular");
    }
    ys[f] = ys[f] * std::conj(hs[f]) / (mag2 + eps);
  }
  std::vector<double> out(n);
  fft.inverse(ys, out);
  return y.with_samples(std::move(out));
}

Trace pad_boundary(const Trace& y, std::size_t pad_len) {
  if (pad_len == 0) return y;
  std::vector<double> out(y.size() + 2 * pad_len, 0.0);
  std::copy(y.values().begin(), y.values().end(), out.begin() + static_cast<std::ptrdiff_t>(pad_len));
  return Trace(std::move(out), y.dt(), y.origin_index() - static_cast<std::int64_t>(pad_len));
}

Trace crop_boundary(const Trace& padded, std::size_t pad_len) {
  if (pad_len == 0) return padded;
  if (padded.size() <= 2 * pad_len) throw DomainError("padded trace too short to crop");
  const auto first = padded.values().begin() + static_cast<std::ptrdiff_t>(pad_len);
  std::vector<double> out(first, first + static_cast<std::ptrdiff_t>(padded.size() - 2 * pad_len));
  return Trace(std::move(out), padded.dt(), padded.origin_index() + static_cast<std::int64_t>(pad_len));
}

double total_variation(std::span<const double> x) {
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) tv += std::abs(x[i + 1] - x[i]);
  return tv;
}

TvdResult tv_deconvolve(const Trace& y, const PulseProfile& h, const TvdConfig& cfg) {
  cfg.validate();
  check_dt(y, h);

  const std::size_t n = y.size();
  const std::size_t pad = cfg.effective_pad(h);
  const Trace padded = pad_boundary(y, pad);
  // Working grid: observed span [0, n_obs), unobserved buffer [n_obs, m).
  const std::size_t n_obs = cfg.boundary == Boundary::circular ? n : pad + n;
  const std::size_t m = cfg.boundary == Boundary::circular ? n : fast_fft_size(padded.size());

  std::vector<double> obs(m, 0.0);
  std::copy(padded.values().begin(), padded.values().end(), obs.begin());

  RealFft fft(m);
  const std::size_t nf = fft.spectrum_size();
  std::vector<cplx> hs(nf);
  fft.forward(h.taps(), hs);
  const auto ds = difference_spectrum(m);

  // z = Hx carries the pulse gain; scaling its penalty by 1/||h||^2 keeps both
  // splits at comparable curvature in the x-update.
  double h_energy = 0.0;
  for (double t : h.taps()) h_energy += t * t;
  const double rho_u = cfg.rho;
  const double rho_z = cfg.rho / h_energy;
  std::vector<double> denom(nf);
  for (std::size_t f = 0; f < nf; ++f) denom[f] = rho_z * std::norm(hs[f]) + rho_u * std::norm(ds[f]);

  std::vector<double> x(m, 0.0), x_prev(m, 0.0), hx(m, 0.0), dx(m, 0.0);
  std::vector<double> z(obs), wz(m, 0.0), u(m, 0.0), wu(m, 0.0);
  std::vector<double> tmp(m);
  std::vector<cplx> spec_a(nf), spec_b(nf);

  auto objective = [&]() {
    double fid = 0.0;
    for (std::size_t i = 0; i < n_obs; ++i) {
      const double r = hx[i] - obs[i];
      fid += cfg.norm_p == 2 ? 0.5 * r * r : std::abs(r);
    }
    double tv = 0.0;
    for (double v : dx) tv += std::abs(v);
    return fid + cfg.lambda * tv;
  };

  TvdResult result{y, {}, 0, false};
  const double shrink_u = cfg.lambda / rho_u;
  const double shrink_z = 1.0 / rho_z;

  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    // x-update: (rho_z H^T H + rho_u D^T D) x = rho_z H^T (z - wz) + rho_u D^T (u - wu)
    for (std::size_t i = 0; i < m; ++i) tmp[i] = z[i] - wz[i];
    fft.forward(tmp, spec_a);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = u[i] - wu[i];
    fft.forward(tmp, spec_b);
    for (std::size_t f = 0; f < nf; ++f) {
      const cplx rhs = rho_z * std::conj(hs[f]) * spec_a[f] + rho_u * std::conj(ds[f]) * spec_b[f];
      spec_a[f] = denom[f] > 0.0 ? rhs / denom[f] : cplx(0.0);
    }
    x_prev.swap(x);
    fft.inverse(spec_a, x);

    fft.forward(x, spec_a);
    for (std::size_t f = 0; f < nf; ++f) spec_a[f] *= hs[f];
    fft.inverse(spec_a, hx);
    circular_diff(x, dx);

    // z-update: proximal step of the fidelity on observed samples, free elsewhere.
    for (std::size_t i = 0; i < m; ++i) {
      const double v = hx[i] + wz[i];
      if (i >= n_obs) {
        z[i] = v;
      } else if (cfg.norm_p == 2) {
        z[i] = (obs[i] + rho_z * v) / (1.0 + rho_z);
      } else {
        z[i] = obs[i] + soft_threshold(v - obs[i], shrink_z);
      }
    }
    for (std::size_t i = 0; i < m; ++i) u[i] = soft_threshold(dx[i] + wu[i], shrink_u);
    for (std::size_t i = 0; i < m; ++i) {
      wz[i] += hx[i] - z[i];
      wu[i] += dx[i] - u[i];
    }

    result.objective_trace.push_back(objective());
    result.iterations_used = it + 1;

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      num += (x[i] - x_prev[i]) * (x[i] - x_prev[i]);
      den += x[i] * x[i];
    }
    if (it > 0 && std::sqrt(num) <= cfg.tol * std::max(std::sqrt(den), 1e-300)) {
      result.converged = true;
      break;
    }
  }

  std::vector<double> est(x.begin() + static_cast<std::ptrdiff_t>(pad),
                          x.begin() + static_cast<std::ptrdiff_t>(pad + n));
  result.estimate = y.with_samples(std::move(est));
  return result;
}

}  // namespace otdr::tvd
