#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "otdr/trace.hpp"

namespace otdr::data {

// Piecewise-constant label: levels[j] held for run_lengths[j] samples.
struct GroundTruthSignal {
  std::vector<double> levels;
  std::vector<std::size_t> run_lengths;
  Trace realized;
};

struct RunRange {
  std::size_t min = 1;
  std::size_t max = 20;
};

struct LevelRange {
  double lo = 0.0;
  double hi = 1.0;
};

// Runs ~ U{min..max}, levels ~ U[lo, hi). The final run is truncated so the
// signal has exactly n_samples, so only that run may fall below min.
GroundTruthSignal sample_ground_truth(std::size_t n_samples, RunRange runs, LevelRange levels,
                                      std::uint64_t seed, double dt = 10e-9);

struct DatasetPair {
  Trace input;
  Trace label;
  std::uint64_t seed;
};

DatasetPair make_pair(const GroundTruthSignal& gt, const PulseProfile& pulse, double noise_sigma,
                      std::uint64_t seed);

enum class SampleFormat { f64, f32 };

struct DatasetManifest {
  std::size_t n_pairs = 3200;
  std::size_t samples_per_curve = 20000;
  std::size_t train_count = 2560;
  std::size_t val_count = 640;
  std::string pulse_source = "parametric";
  double noise_sigma = 0.001;
  std::uint64_t generator_seed = 0;
  int format_version = 1;
  double dt = 10e-9;
  RunRange runs{};
  LevelRange levels{};
  SampleFormat sample_format = SampleFormat::f64;

  void validate() const;
};

nlohmann::json to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const nlohmann::json& j);

// Pair k of the corpus; its seed is derive_seed(generator_seed, k).
DatasetPair generate_pair(const DatasetManifest& manifest, const PulseProfile& pulse, std::size_t k);

// Writes the "ODS1" container: magic, u64 JSON length, manifest JSON, then per
// pair the label and input arrays, each as u64 count + samples. Pairs are
// generated in parallel and written in index order.
void generate_dataset(const DatasetManifest& manifest, const PulseProfile& pulse,
                      const std::filesystem::path& path);

// Streaming / random-access reader over an ODS1 file.
class DatasetReader {
 public:
  explicit DatasetReader(const std::filesystem::path& path);

  const DatasetManifest& manifest() const noexcept { return manifest_; }
  std::size_t size() const noexcept { return manifest_.n_pairs; }
  // Returns (label, input) samples of pair k.
  std::pair<std::vector<double>, std::vector<double>> read_raw(std::size_t k);
  DatasetPair read_pair(std::size_t k);

 private:
  std::vector<double> read_array();

  std::filesystem::path path_;
  std::ifstream in_;
  DatasetManifest manifest_;
  std::uint64_t data_offset_ = 0;
  std::uint64_t pair_bytes_ = 0;
};

// Whole corpus in memory in training precision, split per the manifest.
struct Curve {
  std::vector<float> input;
  std::vector<float> label;
};

struct InMemoryDataset {
  DatasetManifest manifest;
  std::vector<Curve> train;
  std::vector<Curve> val;
};

InMemoryDataset load_dataset(const std::filesystem::path& path);
InMemoryDataset make_in_memory_dataset(const DatasetManifest& manifest, const PulseProfile& pulse);

}  // namespace otdr::data
