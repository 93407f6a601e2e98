#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "otdr/eval.hpp"
#include "otdr/nn/network.hpp"
#include "otdr/trace.hpp"
#include "otdr/tvd.hpp"

namespace otdr::scenario {

enum class Name { fig7, fig9, end_reflection };

Name parse_name(std::string_view s);  // UsageError on unknown names
std::string to_string(Name n);

struct Definition {
  Name name;
  std::size_t n_samples = 2000;
  double initial_intensity = 0.4;
  FiberParams fiber;
  EventList events;
  double dt = 10e-9;
  std::size_t pulse_taps = 10;
  double noise_sigma = 0.001;
  eval::Window residual_window{300, 800};
  eval::Window roi;          // region where events are counted
  std::optional<std::size_t> peak_index;  // reflection whose recovery is reported
};

Definition definition(Name n);

struct Data {
  Definition def;
  PulseProfile pulse;
  Trace truth;
  Trace measured;
};

Data build(Name n, std::uint64_t seed);

// A deconvolution method as seen by the harness.
struct Method {
  std::string label;
  std::function<Trace(const Trace& measured, const PulseProfile& pulse)> run;
  nlohmann::json config = nlohmann::json::object();
};

Method raw_method();
Method tvd_method(const tvd::TvdConfig& cfg, std::string label = "tvd");
Method inverse_method(double eps, std::string label = "inverse");
Method odnet_method(std::shared_ptr<const nn::Network<float>> model, std::string label = "odnet");

// Published residual-noise magnitudes for the simulated comparison, checked
// with a x2 band. Pulse shape, noise draw and training scale all differ here,
// so these are advisory.
inline constexpr double kReferenceStdOdnet = 0.00023;
inline constexpr double kReferenceStdTvd = 0.00075;
inline constexpr double kReferenceBand = 2.0;

struct Result {
  Data data;
  eval::ComparisonReport report;
  std::vector<std::pair<std::string, Trace>> curves;  // method label -> estimate
};

Result run(Name n, const std::vector<Method>& methods, std::uint64_t seed,
           const eval::DetectorConfig& detector = {});

// index,truth,measured,<method>...
void write_curves_csv(const std::filesystem::path& path, const Result& r);

nlohmann::json to_json(const Definition& d);
nlohmann::json to_json(const Result& r);

}  // namespace otdr::scenario
