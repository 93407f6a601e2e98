#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "otdr/convolution.hpp"
#include "otdr/error.hpp"
#include "otdr/scenario.hpp"
#include "otdr/synth.hpp"
#include "otdr/tvd.hpp"

namespace otdr::tvd {
namespace {

constexpr double kDt = 10e-9;

double ref_soft(double v, double t) {
  const double mag = std::max(std::abs(v) - t, 0.0);
  return v < 0 ? -mag : mag;
}

// Circular-grid objective, written independently of the solver:
// 1/2 ||h (*) x - y||^2 + lambda * sum_i |x[(i+1) mod n] - x[i]|.
double circular_objective(const std::vector<double>& x, const std::vector<double>& y, std::span<const double> h,
                          double lambda) {
  const std::size_t n = x.size();
  double fid = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double hx = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) hx += h[k] * x[(i + n - k % n) % n];
    fid += 0.5 * (hx - y[i]) * (hx - y[i]);
  }
  double tv = 0.0;
  for (std::size_t i = 0; i < n; ++i) tv += std::abs(x[(i + 1) % n] - x[i]);
  return fid + lambda * tv;
}

double interior_std(const Trace& est, const Trace& truth, std::size_t lo, std::size_t hi) {
  double mean = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) mean += est[i] - truth[i];
  mean /= static_cast<double>(hi - lo + 1);
  double acc = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) acc += std::pow(est[i] - truth[i] - mean, 2);
  return std::sqrt(acc / static_cast<double>(hi - lo));
}

double edge_rms(const Trace& est, const Trace& truth, std::size_t width) {
  double acc = 0.0;
  const std::size_t n = est.size();
  for (std::size_t i = 0; i < width; ++i) {
    acc += std::pow(est[i] - truth[i], 2) + std::pow(est[n - 1 - i] - truth[n - 1 - i], 2);
  }
  return std::sqrt(acc / static_cast<double>(2 * width));
}

TEST(SoftThreshold, MatchesScalarReference) {
  std::mt19937_64 g(1);
  std::normal_distribution<double> d(0.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = d(g), t = std::abs(d(g));
    EXPECT_EQ(soft_threshold(v, t), ref_soft(v, t));
  }
  EXPECT_EQ(soft_threshold(0.5, 0.5), 0.0);
  EXPECT_EQ(soft_threshold(-2.0, 0.5), -1.5);
}

TEST(Config, Validation) {
  TvdConfig c;
  EXPECT_NO_THROW(c.validate());
  c.lambda = -1.0;
  EXPECT_THROW(c.validate(), DomainError);
  c = {};
  c.rho = 0.0;
  EXPECT_THROW(c.validate(), DomainError);
  c = {};
  c.max_iters = 0;
  EXPECT_THROW(c.validate(), DomainError);
  c = {};
  c.tol = 0.0;
  EXPECT_THROW(c.validate(), DomainError);
  c = {};
  c.norm_p = 3;
  EXPECT_THROW(c.validate(), DomainError);
  c = {};
  const auto pulse = parametric_pulse(100e-9, 0.0, kDt);
  EXPECT_EQ(c.effective_pad(pulse), 20u);
  c.pad_len = 64;
  EXPECT_EQ(c.effective_pad(pulse), 64u);
}

TEST(Padding, IdentityAndInverse) {
  const Trace y({1.0, 2.0, 3.0}, kDt);
  EXPECT_EQ(pad_boundary(y, 0).values(), y.values());
  const auto p = pad_boundary(y, 4);
  ASSERT_EQ(p.size(), 11u);
  EXPECT_EQ(p[0], 0.0);
  EXPECT_EQ(p[4], 1.0);
  EXPECT_EQ(p[10], 0.0);
  EXPECT_EQ(crop_boundary(p, 4).values(), y.values());
}

TEST(InverseFilter, ImpulseIsIdentity) {
  std::mt19937_64 g(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(333);
  for (auto& s : v) s = u(g);
  const Trace y(v, kDt);
  const auto x = inverse_filter(y, PulseProfile::impulse(kDt), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(x[i], v[i], 1e-12);
}

TEST(InverseFilter, NoiselessRoundTrip) {
  // 2001 samples keep the 10-tap rectangle free of exact spectral zeros; the
  // zero tail makes the linear forward model coincide with the circular one.
  const auto pulse = parametric_pulse(100e-9, 0.0, kDt);
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(2001, 0.0);
  for (std::size_t i = 0; i < 1900; ++i) x[i] = u(g);
  const auto y = convolve(Trace(x, kDt), pulse);
  const auto est = inverse_filter(y, pulse, 0.0);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += std::pow(est[i] - x[i], 2);
    den += x[i] * x[i];
  }
  EXPECT_LT(std::sqrt(num / den), 1e-6);
}

TEST(InverseFilter, SpectralZeroRejected) {
  // 2000 = 200 * 10: the rectangle's response vanishes at bin 200
  const auto pulse = parametric_pulse(100e-9, 0.0, kDt);
  const Trace y(std::vector<double>(2000, 1.0), kDt);
  EXPECT_THROW(inverse_filter(y, pulse, 0.0), DomainError);
  EXPECT_NO_THROW(inverse_filter(y, pulse, 1e-3));
  EXPECT_THROW(inverse_filter(y, pulse, -1.0), DomainError);
}

TEST(InverseFilter, AmplifiesNoise) {
  const auto pulse = parametric_pulse(100e-9, 0.0, kDt);
  const Trace clean(std::vector<double>(2001, 0.0), kDt);
  const auto noisy = add_gaussian_noise(clean, 0.001, 4);
  const auto est = inverse_filter(noisy, pulse, 0.0);
  EXPECT_GT(interior_std(est, clean, 0, 2000), 0.01);
}

TEST(Tvd, LargeLambdaSuppressesVariation) {
  // The exact minimizer is flat; ADMM approaches it slowly through the
  // lowest frequencies, so only a strong reduction is asserted here.
  const auto d = scenario::build(scenario::Name::fig7, 7);
  TvdConfig c;
  c.lambda = 1e3;
  c.max_iters = 5000;
  const auto r = tv_deconvolve(d.measured, d.pulse, c);
  EXPECT_LT(total_variation(r.estimate.samples()), 0.5 * total_variation(d.truth.samples()));
}

TEST(Tvd, ZeroLambdaMatchesInverseFilter) {
  const auto pulse = parametric_pulse(100e-9, 0.0, kDt);
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(201, 0.0);
  for (std::size_t i = 0; i < 180; ++i) x[i] = u(g);
  const auto y = convolve(Trace(x, kDt), pulse);
  TvdConfig c;
  c.lambda = 0.0;
  c.boundary = Boundary::circular;
  c.max_iters = 20000;
  c.tol = 1e-14;
  const auto r = tv_deconvolve(y, pulse, c);
  const auto oracle = inverse_filter(y, pulse, 0.0);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += std::pow(r.estimate[i] - oracle[i], 2);
    den += oracle[i] * oracle[i];
  }
  EXPECT_LT(std::sqrt(num / den), 1e-5);
}

TEST(Tvd, ObjectiveNonIncreasing) {
  const auto d = scenario::build(scenario::Name::fig7, 7);
  const auto r = tv_deconvolve(d.measured, d.pulse, TvdConfig{});
  ASSERT_GT(r.objective_trace.size(), 10u);
  for (std::size_t i = 2; i < r.objective_trace.size(); ++i) {
    EXPECT_LE(r.objective_trace[i], r.objective_trace[i - 1] + 1e-8) << "iteration " << i;
  }
  for (double v : r.objective_trace) EXPECT_TRUE(std::isfinite(v));
}

TEST(Tvd, RecoversStep) {
  const auto d = scenario::build(scenario::Name::fig7, 7);
  const auto r = tv_deconvolve(d.measured, d.pulse, TvdConfig{});
  std::size_t at = 0;
  double largest = 0.0;
  for (std::size_t i = 900; i < 1100; ++i) {
    const double drop = r.estimate[i - 1] - r.estimate[i];
    if (drop > largest) {
      largest = drop;
      at = i;
    }
  }
  EXPECT_NEAR(static_cast<double>(at), 1000.0, 1.0);
  // the step size itself: 0.4 * attenuation * (1 - 10^-0.3)
  EXPECT_NEAR(r.estimate[995] - r.estimate[1005], d.truth[995] - d.truth[1005], 0.02);
}

TEST(Tvd, PaddingSuppressesEndAnomalies) {
  const auto d = scenario::build(scenario::Name::fig7, 7);
  TvdConfig circ;
  circ.boundary = Boundary::circular;
  const auto rc = tv_deconvolve(d.measured, d.pulse, circ);
  TvdConfig padc;
  padc.pad_len = 64;
  const auto rp = tv_deconvolve(d.measured, d.pulse, padc);
  const double ic = interior_std(rc.estimate, d.truth, 300, 800);
  const double ip = interior_std(rp.estimate, d.truth, 300, 800);
  EXPECT_GT(edge_rms(rc.estimate, d.truth, 20), 5.0 * ic);
  EXPECT_LT(edge_rms(rp.estimate, d.truth, 20), 3.0 * ip);
}

TEST(Tvd, SmallInstanceLocalOptimality) {
  const PulseProfile h({1.0, 0.6, 0.3}, kDt);
  std::mt19937_64 g(6);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<double> truth = {0.2, 0.2, 0.2, 0.2, 0.9, 0.9, 0.9, 0.5, 0.5, 0.5, 0.5, 0.5,
                               0.1, 0.1, 0.1, 0.1, 0.7, 0.7, 0.7, 0.7, 0.7, 0.3, 0.3, 0.3};
  std::vector<double> y(truth.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (std::size_t k = 0; k < h.size(); ++k) y[i] += h.taps()[k] * truth[(i + y.size() - k) % y.size()];
    y[i] += noise(g);
  }
  TvdConfig c;
  c.lambda = 0.02;
  c.boundary = Boundary::circular;
  c.max_iters = 50000;
  c.tol = 1e-14;
  const auto r = tv_deconvolve(Trace(y, kDt), h, c);
  const std::vector<double> xs(r.estimate.values());
  const double best = circular_objective(xs, y, h.taps(), c.lambda);
  EXPECT_NEAR(best, r.objective_trace.back(), 1e-9);
  std::normal_distribution<double> step(0.0, 1e-3);
  int worse = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    auto p = xs;
    for (auto& v : p) v += step(g);
    if (circular_objective(p, y, h.taps(), c.lambda) >= best - 1e-12) ++worse;
  }
  EXPECT_EQ(worse, 10000);
}

TEST(Tvd, TotalVariationMonotoneInLambda) {
  const auto d = scenario::build(scenario::Name::fig7, 11);
  double prev = INFINITY;
  for (double lambda : {1e-5, 1e-4, 1e-3, 1e-2}) {
    TvdConfig c;
    c.lambda = lambda;
    c.max_iters = 3000;
    const double tv = total_variation(tv_deconvolve(d.measured, d.pulse, c).estimate.samples());
    EXPECT_LE(tv, prev * (1.0 + 1e-6)) << "lambda " << lambda;
    prev = tv;
  }
}

TEST(Tvd, L1FidelityRuns) {
  const auto d = scenario::build(scenario::Name::fig7, 7);
  TvdConfig c;
  c.norm_p = 1;
  c.max_iters = 800;
  const auto r = tv_deconvolve(d.measured, d.pulse, c);
  EXPECT_EQ(r.estimate.size(), d.measured.size());
  EXPECT_LT(interior_std(r.estimate, d.truth, 300, 800), 0.01);
}

TEST(Tvd, NonConvergenceIsReported) {
  const auto d = scenario::build(scenario::Name::fig7, 7);
  TvdConfig c;
  c.max_iters = 3;
  const auto r = tv_deconvolve(d.measured, d.pulse, c);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations_used, 3u);
}

TEST(Tvd, RejectsShortTraceAndDtMismatch) {
  const auto pulse = parametric_pulse(100e-9, 0.0, kDt);
  EXPECT_THROW(tv_deconvolve(Trace(std::vector<double>(5, 1.0), kDt), pulse), DomainError);
  EXPECT_THROW(tv_deconvolve(Trace(std::vector<double>(50, 1.0), 2 * kDt), pulse), ConfigError);
}

}  // namespace
}  // namespace otdr::tvd
