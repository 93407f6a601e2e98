#include "otdr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otdr/error.hpp"
#include "otdr/metrics.hpp"

namespace otdr::eval {

namespace {

void check_same_length(const Trace& a, const Trace& b) {
  if (a.size() != b.size()) {
    throw DomainError("estimate has " + std::to_string(a.size()) + " samples, label has " + std::to_string(b.size()));
  }
}

nlohmann::json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return nullptr;
}

}  // namespace

double psnr(const Trace& estimate, const Trace& label, double peak) {
  check_same_length(estimate, label);
  if (!(peak > 0.0)) throw DomainError("PSNR peak must be positive");
  return psnr_from_mse(mean_squared_error<double, double>(estimate.samples(), label.samples()), peak);
}

double residual_std(const Trace& estimate, const Trace& label, Window w) {
  check_same_length(estimate, label);
  if (w.start > w.end || w.end >= estimate.size()) {
    throw DomainError("window [" + std::to_string(w.start) + ", " + std::to_string(w.end) + "] outside trace of " +
                      std::to_string(estimate.size()) + " samples");
  }
  const std::size_t n = w.end - w.start + 1;
  if (n < 2) throw DomainError("residual window needs at least two samples");
  double mean = 0.0;
  for (std::size_t i = w.start; i <= w.end; ++i) mean += estimate[i] - label[i];
  mean /= static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t i = w.start; i <= w.end; ++i) {
    const double d = estimate[i] - label[i] - mean;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(n - 1));
}

void DetectorConfig::validate() const {
  if (!(step_threshold > 0.0) || !(spike_threshold > 0.0)) throw DomainError("detector thresholds must be positive");
  if (baseline_window < 3 || baseline_window % 2 == 0) throw DomainError("baseline window must be odd and >= 3");
  if (step_span < 1) throw DomainError("step span must be at least 1");
}

std::vector<double> running_median(std::span<const double> x, std::size_t window) {
  const std::size_t n = x.size();
  const std::size_t half = window / 2;
  std::vector<double> out(n), buf;
  buf.reserve(window);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    buf.assign(x.begin() + static_cast<std::ptrdiff_t>(lo), x.begin() + static_cast<std::ptrdiff_t>(hi));
    const auto mid = buf.begin() + static_cast<std::ptrdiff_t>(buf.size() / 2);
    std::nth_element(buf.begin(), mid, buf.end());
    out[i] = *mid;
  }
  return out;
}

std::vector<DetectedEvent> detect_events(const Trace& trace, const DetectorConfig& cfg) {
  cfg.validate();
  const std::size_t n = trace.size();
  const auto x = trace.samples();
  const auto base = running_median(x, cfg.baseline_window);
  std::vector<DetectedEvent> events;

  for (std::size_t i = 0; i < n;) {
    if (x[i] - base[i] <= cfg.spike_threshold) {
      ++i;
      continue;
    }
    std::size_t best = i;
    while (i < n && x[i] - base[i] > cfg.spike_threshold) {
      if (x[i] - base[i] > x[best] - base[best]) best = i;
      ++i;
    }
    events.push_back({best, EventKind::spike, x[best] - base[best]});
  }

  const std::size_t span = cfg.step_span;
  if (n > span) {
    // change[i] = base[i + span - 1] - base[i - 1]: level shift entering at i
    auto change = [&](std::size_t i) { return base[std::min(n - 1, i + span - 1)] - base[i - 1]; };
    for (std::size_t i = 1; i < n;) {
      const double c = change(i);
      if (std::abs(c) <= cfg.step_threshold) {
        ++i;
        continue;
      }
      const bool down = c < 0.0;
      const std::size_t first = i;
      double strongest = c;
      while (i < n && std::abs(change(i)) > cfg.step_threshold && (change(i) < 0.0) == down) {
        if (std::abs(change(i)) > std::abs(strongest)) strongest = change(i);
        ++i;
      }
      const std::size_t last = std::min(n - 1, i - 1 + span - 1);
      std::size_t at = first;
      double sharpest = 0.0;
      for (std::size_t j = first; j <= last; ++j) {
        const double d = base[j] - base[j - 1];
        if ((d < 0.0) == down && std::abs(d) > sharpest) {
          sharpest = std::abs(d);
          at = j;
        }
      }
      events.push_back({at, EventKind::step, strongest});
    }
  }

  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  return events;
}

std::size_t count_in(const std::vector<DetectedEvent>& events, Window w) {
  return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [&](const DetectedEvent& e) {
    return e.index >= w.start && e.index <= w.end;
  }));
}

EvalReport evaluate(const std::string& label, const Trace& estimate, const Trace& truth, Window window,
                    const DetectorConfig& detector, double peak) {
  EvalReport r;
  r.method_label = label;
  r.psnr_db = psnr(estimate, truth, peak);
  r.residual_std = residual_std(estimate, truth, window);
  r.window = window;
  r.detected_events = detect_events(estimate, detector);
  return r;
}

const EvalReport& ComparisonReport::method(const std::string& label) const {
  for (const auto& m : methods) {
    if (m.method_label == label) return m;
  }
  throw UsageError("no method labelled '" + label + "' in report");
}

ComparisonReport compare(std::vector<EvalReport> reports) {
  ComparisonReport out;
  out.methods = std::move(reports);
  for (std::size_t a = 0; a < out.methods.size(); ++a) {
    for (std::size_t b = a + 1; b < out.methods.size(); ++b) {
      const auto& ra = out.methods[a];
      const auto& rb = out.methods[b];
      const double suppression = (ra.residual_std > 0.0 && rb.residual_std > 0.0)
                                     ? 10.0 * std::log10(rb.residual_std / ra.residual_std)
                                     : std::numeric_limits<double>::quiet_NaN();
      out.deltas.push_back({ra.method_label, rb.method_label, ra.psnr_db - rb.psnr_db, suppression});
    }
  }
  return out;
}

nlohmann::json to_json(const DetectedEvent& e) {
  return {{"index", e.index}, {"kind", e.kind == EventKind::step ? "step" : "spike"}, {"magnitude", e.magnitude}};
}

nlohmann::json to_json(const EvalReport& r) {
  auto events = nlohmann::json::array();
  for (const auto& e : r.detected_events) events.push_back(to_json(e));
  nlohmann::json j = {
      {"method_label", r.method_label},
      {"psnr_db", finite_or_string(r.psnr_db)},
      {"residual_std", r.residual_std},
      {"window", {r.window.start, r.window.end}},
      {"detected_events", events},
  };
  for (const auto& [k, v] : r.extras.items()) j[k] = v;
  return j;
}

nlohmann::json to_json(const ComparisonReport& r) {
  auto methods = nlohmann::json::array();
  for (const auto& m : r.methods) methods.push_back(to_json(m));
  auto deltas = nlohmann::json::array();
  for (const auto& d : r.deltas) {
    deltas.push_back({{"first", d.first},
                      {"second", d.second},
                      {"psnr_gain_db", finite_or_string(d.psnr_gain_db)},
                      {"noise_suppression_db", finite_or_string(d.noise_suppression_db)}});
  }
  return {{"methods", methods}, {"deltas", deltas}, {"config", r.config}};
}

}  // namespace otdr::eval
