#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "otdr/trace.hpp"

namespace otdr::eval {

// Inclusive index window [start, end].
struct Window {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const Window&, const Window&) = default;
};

// 10 log10(peak^2 / MSE); +inf when estimate == label.
double psnr(const Trace& estimate, const Trace& label, double peak = 1.0);

// Sample standard deviation (n - 1) of estimate - label over the window,
// which must hold at least two samples.
double residual_std(const Trace& estimate, const Trace& label, Window window);

enum class EventKind { step, spike };

struct DetectedEvent {
  std::size_t index;
  EventKind kind;
  double magnitude;  // signed level change for steps, height above baseline for spikes
};

struct DetectorConfig {
  double step_threshold = 0.05;
  double spike_threshold = 0.05;
  std::size_t baseline_window = 41;  // odd; running-median width
  std::size_t step_span = 12;        // samples over which a level change must persist

  void validate() const;
};

// Threshold detector on a running-median baseline. Samples rising above the
// baseline by more than spike_threshold form spike regions; one contiguous
// region is one event (so a peak spread over neighbouring samples counts
// once, and two peaks need a below-threshold sample between them). Steps are
// level changes of the baseline exceeding step_threshold across step_span
// samples, reported at the sharpest one-sample change.
std::vector<DetectedEvent> detect_events(const Trace& trace, const DetectorConfig& cfg = {});

std::vector<double> running_median(std::span<const double> x, std::size_t window);

std::size_t count_in(const std::vector<DetectedEvent>& events, Window window);

struct EvalReport {
  std::string method_label;
  double psnr_db = 0.0;
  double residual_std = 0.0;
  Window window;
  std::vector<DetectedEvent> detected_events;
  nlohmann::json extras = nlohmann::json::object();
};

EvalReport evaluate(const std::string& label, const Trace& estimate, const Trace& truth, Window window,
                    const DetectorConfig& detector = {}, double peak = 1.0);

struct MethodDelta {
  std::string first;
  std::string second;
  double psnr_gain_db;          // psnr(first) - psnr(second)
  double noise_suppression_db;  // 10 log10(std(second) / std(first))
};

struct ComparisonReport {
  std::vector<EvalReport> methods;
  std::vector<MethodDelta> deltas;
  nlohmann::json config = nlohmann::json::object();

  const EvalReport& method(const std::string& label) const;
};

ComparisonReport compare(std::vector<EvalReport> reports);

nlohmann::json to_json(const DetectedEvent& e);
nlohmann::json to_json(const EvalReport& r);
nlohmann::json to_json(const ComparisonReport& r);

}  // namespace otdr::eval
