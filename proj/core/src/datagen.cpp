#include "otdr/datagen.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <optional>
#include <random>
#include <thread>

#include "otdr/convolution.hpp"
#include "otdr/error.hpp"
#include "otdr/rng.hpp"
#include "otdr/synth.hpp"

namespace otdr::data {

namespace {

constexpr std::array<char, 4> kDatasetMagic{'O', 'D', 'S', '1'};

std::size_t sample_bytes(SampleFormat f) { return f == SampleFormat::f64 ? 8 : 4; }

void write_array(std::ostream& out, std::span<const double> values, SampleFormat format) {
  const std::uint64_t n = values.size();
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  if (format == SampleFormat::f64) {
    out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(n * 8));
  } else {
    std::vector<float> narrow(values.begin(), values.end());
    out.write(reinterpret_cast<const char*>(narrow.data()), static_cast<std::streamsize>(n * 4));
  }
}

}  // namespace

GroundTruthSignal sample_ground_truth(std::size_t n_samples, RunRange runs, LevelRange levels,
                                      std::uint64_t seed, double dt) {
  if (n_samples == 0) throw DomainError("ground truth needs at least one sample");
  if (runs.min < 1 || runs.min > runs.max) throw DomainError("run range must satisfy 1 <= min <= max");
  if (!(levels.lo < levels.hi)) throw DomainError("level range must satisfy lo < hi");

  Rng rng = make_rng(seed);
  std::uniform_int_distribution<std::size_t> run_dist(runs.min, runs.max);
  std::uniform_real_distribution<double> level_dist(levels.lo, levels.hi);

  GroundTruthSignal gt{{}, {}, Trace({0.0}, dt)};
  std::vector<double> samples;
  samples.reserve(n_samples);
  while (samples.size() < n_samples) {
    const std::size_t run = std::min(run_dist(rng), n_samples - samples.size());
    const double level = level_dist(rng);
    gt.levels.push_back(level);
    gt.run_lengths.push_back(run);
    samples.insert(samples.end(), run, level);
  }
  gt.realized = Trace(std::move(samples), dt);
  return gt;
}

DatasetPair make_pair(const GroundTruthSignal& gt, const PulseProfile& pulse, double noise_sigma,
                      std::uint64_t seed) {
  Trace input = add_gaussian_noise(convolve(gt.realized, pulse), noise_sigma, derive_seed(seed, 1));
  return {std::move(input), gt.realized, seed};
}

void DatasetManifest::validate() const {
  if (n_pairs == 0) throw DomainError("dataset needs at least one pair");
  if (samples_per_curve == 0) throw DomainError("curves need at least one sample");
  if (train_count + val_count != n_pairs) throw DomainError("train + val counts must equal n_pairs");
  if (!(noise_sigma >= 0.0)) throw DomainError("noise sigma must be non-negative");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (runs.min < 1 || runs.min > runs.max) throw DomainError("run range must satisfy 1 <= min <= max");
  if (!(levels.lo < levels.hi)) throw DomainError("level range must satisfy lo < hi");
}

nlohmann::json to_json(const DatasetManifest& m) {
  return {
      {"n_pairs", m.n_pairs},
      {"samples_per_curve", m.samples_per_curve},
      {"split", {m.train_count, m.val_count}},
      {"pulse_source", m.pulse_source},
      {"noise_sigma", m.noise_sigma},
      {"generator_seed", m.generator_seed},
      {"format_version", m.format_version},
      {"dt", m.dt},
      {"run_range", {m.runs.min, m.runs.max}},
      {"level_range", {m.levels.lo, m.levels.hi}},
      {"sample_format", m.sample_format == SampleFormat::f64 ? "f64" : "f32"},
  };
}

DatasetManifest manifest_from_json(const nlohmann::json& j) {
  try {
    DatasetManifest m;
    m.n_pairs = j.at("n_pairs").get<std::size_t>();
    m.samples_per_curve = j.at("samples_per_curve").get<std::size_t>();
    m.train_count = j.at("split").at(0).get<std::size_t>();
    m.val_count = j.at("split").at(1).get<std::size_t>();
    m.pulse_source = j.at("pulse_source").get<std::string>();
    m.noise_sigma = j.at("noise_sigma").get<double>();
    m.generator_seed = j.at("generator_seed").get<std::uint64_t>();
    m.format_version = j.at("format_version").get<int>();
    m.dt = j.value("dt", 10e-9);
    if (j.contains("run_range")) m.runs = {j["run_range"].at(0).get<std::size_t>(), j["run_range"].at(1).get<std::size_t>()};
    if (j.contains("level_range")) m.levels = {j["level_range"].at(0).get<double>(), j["level_range"].at(1).get<double>()};
    const auto fmt = j.value("sample_format", std::string("f64"));
    if (fmt != "f64" && fmt != "f32") throw FormatError("unknown sample_format '" + fmt + "'");
    m.sample_format = fmt == "f64" ? SampleFormat::f64 : SampleFormat::f32;
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed dataset manifest: ") + e.what());
  }
}

DatasetPair generate_pair(const DatasetManifest& manifest, const PulseProfile& pulse, std::size_t k) {
  const std::uint64_t seed = derive_seed(manifest.generator_seed, k);
  const auto gt = sample_ground_truth(manifest.samples_per_curve, manifest.runs, manifest.levels,
                                      derive_seed(seed, 0), manifest.dt);
  return make_pair(gt, pulse, manifest.noise_sigma, seed);
}

void generate_dataset(const DatasetManifest& manifest, const PulseProfile& pulse,
                      const std::filesystem::path& path) {
  manifest.validate();
  if (manifest.format_version != 1) throw ConfigError("only dataset format_version 1 is supported");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");

  const std::string header = to_json(manifest).dump();
  out.write(kDatasetMagic.data(), kDatasetMagic.size());
  const std::uint64_t header_len = header.size();
  out.write(reinterpret_cast<const char*>(&header_len), sizeof(header_len));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));

  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t chunk = std::max<std::size_t>(workers * 4, 1);
  std::vector<std::optional<DatasetPair>> slots(chunk);
  for (std::size_t base = 0; base < manifest.n_pairs; base += chunk) {
    const std::size_t count = std::min(chunk, manifest.n_pairs - base);
    if (workers == 1) {
      for (std::size_t i = 0; i < count; ++i) slots[i] = generate_pair(manifest, pulse, base + i);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (std::size_t i = w; i < count; i += workers) slots[i] = generate_pair(manifest, pulse, base + i);
        });
      }
    }
    for (std::size_t i = 0; i < count; ++i) {
      write_array(out, slots[i]->label.samples(), manifest.sample_format);
      write_array(out, slots[i]->input.samples(), manifest.sample_format);
      slots[i].reset();
    }
    if (!out) throw IoError("write failed for " + path.string());
  }
}

DatasetReader::DatasetReader(const std::filesystem::path& path)
    : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw IoError("cannot open " + path.string() + " for reading");
  std::array<char, 4> magic{};
  if (!in_.read(magic.data(), magic.size()) || magic != kDatasetMagic) {
    throw FormatError(path.string() + ": not an ODS1 dataset file");
  }
  std::uint64_t header_len = 0;
  if (!in_.read(reinterpret_cast<char*>(&header_len), sizeof(header_len)) || header_len > (1u << 24)) {
    throw FormatError(path.string() + ": bad manifest length");
  }
  std::string header(header_len, '\0');
  if (!in_.read(header.data(), static_cast<std::streamsize>(header_len))) {
    throw FormatError(path.string() + ": truncated manifest");
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": manifest is not valid JSON: " + e.what());
  }
  manifest_ = manifest_from_json(j);
  if (manifest_.format_version != 1) {
    throw FormatError(path.string() + ": unsupported format_version " + std::to_string(manifest_.format_version));
  }
  data_offset_ = 4 + 8 + header_len;
  pair_bytes_ = 2 * (8 + manifest_.samples_per_curve * sample_bytes(manifest_.sample_format));
  const auto expected = data_offset_ + pair_bytes_ * manifest_.n_pairs;
  if (std::filesystem::file_size(path) != expected) {
    throw FormatError(path.string() + ": file size does not match manifest");
  }
}

std::vector<double> DatasetReader::read_array() {
  std::uint64_t n = 0;
  if (!in_.read(reinterpret_cast<char*>(&n), sizeof(n)) || n != manifest_.samples_per_curve) {
    throw FormatError(path_.string() + ": corrupt sample array header");
  }
  std::vector<double> values(n);
  if (manifest_.sample_format == SampleFormat::f64) {
    in_.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(n * 8));
  } else {
    std::vector<float> narrow(n);
    in_.read(reinterpret_cast<char*>(narrow.data()), static_cast<std::streamsize>(n * 4));
    std::copy(narrow.begin(), narrow.end(), values.begin());
  }
  if (!in_) throw FormatError(path_.string() + ": truncated sample array");
  return values;
}

std::pair<std::vector<double>, std::vector<double>> DatasetReader::read_raw(std::size_t k) {
  if (k >= manifest_.n_pairs) throw DomainError("pair index out of range");
  in_.clear();
  in_.seekg(static_cast<std::streamoff>(data_offset_ + pair_bytes_ * k));
  auto label = read_array();
  auto input = read_array();
  return {std::move(label), std::move(input)};
}

DatasetPair DatasetReader::read_pair(std::size_t k) {
  auto [label, input] = read_raw(k);
  return {Trace(std::move(input), manifest_.dt), Trace(std::move(label), manifest_.dt),
          derive_seed(manifest_.generator_seed, k)};
}

namespace {

Curve to_curve(std::span<const double> input, std::span<const double> label) {
  return {std::vector<float>(input.begin(), input.end()), std::vector<float>(label.begin(), label.end())};
}

}  // namespace

InMemoryDataset load_dataset(const std::filesystem::path& path) {
  DatasetReader reader(path);
  InMemoryDataset ds{reader.manifest(), {}, {}};
  for (std::size_t k = 0; k < reader.size(); ++k) {
    auto [label, input] = reader.read_raw(k);
    (k < ds.manifest.train_count ? ds.train : ds.val).push_back(to_curve(input, label));
  }
  return ds;
}

InMemoryDataset make_in_memory_dataset(const DatasetManifest& manifest, const PulseProfile& pulse) {
  manifest.validate();
  InMemoryDataset ds{manifest, {}, {}};
  for (std::size_t k = 0; k < manifest.n_pairs; ++k) {
    auto pair = generate_pair(manifest, pulse, k);
    (k < manifest.train_count ? ds.train : ds.val).push_back(to_curve(pair.input.samples(), pair.label.samples()));
  }
  return ds;
}

}  // namespace otdr::data
