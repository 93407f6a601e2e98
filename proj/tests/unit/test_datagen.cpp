#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numeric>

#include <gtest/gtest.h>

#include "otdr/datagen.hpp"
#include "otdr/error.hpp"
#include "otdr/synth.hpp"
#include "otdr/tvd.hpp"

namespace otdr::data {
namespace {

constexpr double kDt = 10e-9;

// Runs recovered from the realized samples alone.
std::vector<std::size_t> observed_runs(const GroundTruthSignal& gt) {
  std::vector<std::size_t> runs;
  std::size_t offset = 0;
  for (std::size_t r : gt.run_lengths) {
    for (std::size_t i = offset; i < offset + r; ++i) EXPECT_EQ(gt.realized[i], gt.realized[offset]);
    offset += r;
    runs.push_back(r);
  }
  EXPECT_EQ(offset, gt.realized.size());
  return runs;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(GroundTruth, RunLengthStatistics) {
  const auto gt = sample_ground_truth(20000, {1, 20}, {0.0, 1.0}, 3);
  ASSERT_EQ(gt.realized.size(), 20000u);
  ASSERT_EQ(gt.levels.size(), gt.run_lengths.size());
  const auto runs = observed_runs(gt);
  EXPECT_EQ(std::accumulate(runs.begin(), runs.end(), std::size_t{0}), 20000u);
  for (std::size_t j = 0; j + 1 < runs.size(); ++j) {
    EXPECT_GE(runs[j], 1u);
    EXPECT_LE(runs[j], 20u);
  }
  // the final run is truncated; leave it out of the mean
  const double mean = std::accumulate(runs.begin(), runs.end() - 1, 0.0) / static_cast<double>(runs.size() - 1);
  EXPECT_NEAR(mean, 10.5, 0.5);
}

TEST(GroundTruth, DegenerateRange) {
  const auto gt = sample_ground_truth(15, {5, 5}, {0.0, 1.0}, 1);
  EXPECT_EQ(gt.run_lengths, (std::vector<std::size_t>{5, 5, 5}));
}

TEST(GroundTruth, LevelStatistics) {
  const auto gt = sample_ground_truth(20000, {1, 20}, {0.0, 1.0}, 8);
  double mean = 0.0;
  for (double v : gt.realized.samples()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    mean += v;
  }
  EXPECT_NEAR(mean / 20000.0, 0.5, 0.02);
}

TEST(GroundTruth, InvalidRanges) {
  EXPECT_THROW(sample_ground_truth(10, {0, 5}, {0.0, 1.0}, 1), DomainError);
  EXPECT_THROW(sample_ground_truth(10, {6, 5}, {0.0, 1.0}, 1), DomainError);
  EXPECT_THROW(sample_ground_truth(10, {1, 5}, {1.0, 1.0}, 1), DomainError);
  EXPECT_THROW(sample_ground_truth(0, {1, 5}, {0.0, 1.0}, 1), DomainError);
}

TEST(GroundTruth, Deterministic) {
  const auto a = sample_ground_truth(500, {1, 20}, {0.0, 1.0}, 99);
  const auto b = sample_ground_truth(500, {1, 20}, {0.0, 1.0}, 99);
  const auto c = sample_ground_truth(500, {1, 20}, {0.0, 1.0}, 100);
  EXPECT_EQ(a.realized, b.realized);
  EXPECT_NE(a.realized, c.realized);
}

TEST(Pair, IdentityPipeline) {
  const auto gt = sample_ground_truth(300, {1, 20}, {0.0, 1.0}, 2);
  const auto p = make_pair(gt, PulseProfile::impulse(kDt), 0.0, 5);
  EXPECT_EQ(p.input, p.label);
  EXPECT_EQ(p.label, gt.realized);
}

TEST(Pair, ConvolutionSmooths) {
  const auto pulse = parametric_pulse(100e-9, 0.0, kDt);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto gt = sample_ground_truth(2000, {1, 20}, {0.0, 1.0}, s);
    const auto p = make_pair(gt, pulse, 0.001, s);
    ASSERT_EQ(p.input.size(), p.label.size());
    // compare shapes at equal scale: the rectangle has gain 10
    std::vector<double> scaled(p.input.samples().begin(), p.input.samples().end());
    for (auto& v : scaled) v /= pulse.tap_sum();
    EXPECT_LT(tvd::total_variation(scaled), tvd::total_variation(p.label.samples()));
  }
}

TEST(Pair, IndependentNoisePerPair) {
  DatasetManifest m;
  m.n_pairs = 2;
  m.samples_per_curve = 4000;
  m.train_count = 1;
  m.val_count = 1;
  m.generator_seed = 12;
  const auto pulse = PulseProfile::impulse(kDt);
  const auto a = generate_pair(m, pulse, 0), b = generate_pair(m, pulse, 1);
  std::vector<double> na, nb;
  for (std::size_t i = 0; i < 4000; ++i) {
    na.push_back(a.input[i] - a.label[i]);
    nb.push_back(b.input[i] - b.label[i]);
  }
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < 4000; ++i) {
    sab += na[i] * nb[i];
    saa += na[i] * na[i];
    sbb += nb[i] * nb[i];
  }
  // |corr| of independent series is ~ 1/sqrt(N) = 0.016
  EXPECT_LT(std::abs(sab / std::sqrt(saa * sbb)), 0.07);
  EXPECT_NE(a.seed, b.seed);
}

TEST(Manifest, Validation) {
  DatasetManifest m;
  EXPECT_NO_THROW(m.validate());
  m.train_count = 100;
  EXPECT_ANY_THROW(m.validate());
  m = {};
  m.noise_sigma = -1.0;
  EXPECT_ANY_THROW(m.validate());
  m = {};
  EXPECT_EQ(m.n_pairs, 3200u);
  EXPECT_EQ(m.train_count, 2560u);
  EXPECT_EQ(m.val_count, 640u);
  EXPECT_EQ(m.samples_per_curve, 20000u);
}

TEST(Manifest, JsonRoundTrip) {
  DatasetManifest m;
  m.n_pairs = 7;
  m.train_count = 5;
  m.val_count = 2;
  m.pulse_source = "file:p.csv";
  m.generator_seed = 0xFFFFFFFFFFFFull;
  m.sample_format = SampleFormat::f32;
  m.runs = {3, 9};
  const auto back = manifest_from_json(to_json(m));
  EXPECT_EQ(to_json(back), to_json(m));
}

class DatasetFile : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("otdr_ds_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
    m_.n_pairs = 24;
    m_.samples_per_curve = 500;
    m_.train_count = 20;
    m_.val_count = 4;
    m_.generator_seed = 77;
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
  DatasetManifest m_;
  PulseProfile pulse_ = parametric_pulse(100e-9, 0.0, kDt);
};

TEST_F(DatasetFile, ByteIdenticalRegeneration) {
  generate_dataset(m_, pulse_, dir_ / "a.ods");
  generate_dataset(m_, pulse_, dir_ / "b.ods");
  const auto a = slurp(dir_ / "a.ods");
  EXPECT_EQ(a.substr(0, 4), "ODS1");
  EXPECT_EQ(a, slurp(dir_ / "b.ods"));
  m_.generator_seed = 78;
  generate_dataset(m_, pulse_, dir_ / "c.ods");
  EXPECT_NE(a, slurp(dir_ / "c.ods"));
}

TEST_F(DatasetFile, ReaderMatchesGenerator) {
  generate_dataset(m_, pulse_, dir_ / "a.ods");
  DatasetReader r(dir_ / "a.ods");
  EXPECT_EQ(r.size(), 24u);
  EXPECT_EQ(to_json(r.manifest()), to_json(m_));
  for (std::size_t k : {23u, 0u, 11u}) {
    const auto expect = generate_pair(m_, pulse_, k);
    const auto got = r.read_pair(k);
    EXPECT_EQ(got.input, expect.input);
    EXPECT_EQ(got.label, expect.label);
  }
  const auto ds = load_dataset(dir_ / "a.ods");
  ASSERT_EQ(ds.train.size(), 20u);
  ASSERT_EQ(ds.val.size(), 4u);
  const auto p20 = generate_pair(m_, pulse_, 20);
  EXPECT_EQ(ds.val[0].input[100], static_cast<float>(p20.input[100]));
  const auto mem = make_in_memory_dataset(m_, pulse_);
  EXPECT_EQ(mem.train[3].label, ds.train[3].label);
  EXPECT_EQ(mem.val[3].input, ds.val[3].input);
}

TEST_F(DatasetFile, Float32Storage) {
  m_.sample_format = SampleFormat::f32;
  generate_dataset(m_, pulse_, dir_ / "f.ods");
  DatasetReader r(dir_ / "f.ods");
  const auto expect = generate_pair(m_, pulse_, 5);
  const auto got = r.read_pair(5);
  for (std::size_t i = 0; i < 500; ++i) EXPECT_EQ(got.input[i], static_cast<double>(static_cast<float>(expect.input[i])));
}

TEST_F(DatasetFile, CorruptionDetected) {
  generate_dataset(m_, pulse_, dir_ / "a.ods");
  auto bytes = slurp(dir_ / "a.ods");
  {
    std::ofstream out(dir_ / "trunc.ods", std::ios::binary);
    out << bytes.substr(0, bytes.size() - 9);
  }
  EXPECT_THROW(DatasetReader(dir_ / "trunc.ods"), FormatError);
  bytes[0] = 'X';
  {
    std::ofstream out(dir_ / "magic.ods", std::ios::binary);
    out << bytes;
  }
  EXPECT_THROW(DatasetReader(dir_ / "magic.ods"), FormatError);
  EXPECT_THROW(DatasetReader(dir_ / "nope.ods"), IoError);
}

}  // namespace
}  // namespace otdr::data
