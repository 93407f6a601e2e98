#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "otdr/cli/cli.hpp"
#include "otdr/trace_io.hpp"
#include "otdr/version.hpp"

namespace otdr::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

std::size_t data_rows(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n - 1;  // header
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("otdr_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  int run(std::vector<std::string> args) {
    if (std::find(args.begin(), args.end(), "--verbosity") == args.end()) {
      args.insert(args.begin(), {"--verbosity", "warn"});
    }
    return dispatch(args);
  }
  fs::path dir(const std::string& name) const { return root_ / name; }

  // small corpus plus a two-epoch model, shared by the nn tests
  fs::path tiny_model() {
    const auto d = dir("model");
    EXPECT_EQ(run({"--seed", "3", "--out-dir", d.string(), "datagen", "--pairs", "12", "--len", "300", "--split",
                   "10/2"}),
              kOk);
    EXPECT_EQ(run({"--seed", "3", "--out-dir", d.string(), "train", "--data", (d / "dataset.ods").string(),
                   "--resblocks", "1", "--channels", "4", "--kernel", "5", "--epochs", "2", "--batch", "5", "--crop",
                   "128"}),
              kOk);
    return d / "model.odn";
  }

  fs::path root_;
};

TEST_F(Cli, SynthWritesTracesAndEcho) {
  const auto out = dir("fig7");
  ASSERT_EQ(run({"synth", "--scenario", "fig7", "--seed", "7", "--out-dir", out.string()}), kOk);
  for (const char* f : {"truth.csv", "measured.csv", "pulse.csv", "config.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  EXPECT_EQ(data_rows(out / "measured.csv"), 2000u);
  const auto echo = load(out / "config.json");
  EXPECT_EQ(echo.at("tool"), "otdr");
  EXPECT_EQ(echo.at("version"), kVersion);
  EXPECT_EQ(echo.at("command"), "synth");
  EXPECT_EQ(echo.at("global").at("seed"), 7);
  EXPECT_EQ(echo.at("synth").at("scenario"), "fig7");
}

TEST_F(Cli, DefaultsAreEchoedExplicitly) {
  const auto out = dir("defaults");
  ASSERT_EQ(run({"--out-dir", out.string(), "synth"}), kOk);
  ASSERT_EQ(run({"--out-dir", out.string(), "deconv", "tv", "--in", (out / "measured.csv").string()}), kOk);
  const auto echo = load(out / "config.json");
  EXPECT_EQ(echo.at("command"), "deconv tv");
  const auto& s = echo.at("deconv_tv");
  for (const char* key : {"lambda", "norm", "iters", "tol", "rho", "boundary", "pad", "pulse", "pulse_width",
                          "rise_fraction", "dt", "out", "report"}) {
    EXPECT_TRUE(s.contains(key)) << key;
  }
  EXPECT_EQ(s.at("lambda"), 2e-4);
  EXPECT_EQ(echo.at("global").at("seed"), 0);
}

TEST_F(Cli, DeconvPreservesRowCount) {
  const auto out = dir("deconv");
  ASSERT_EQ(run({"--seed", "2", "--out-dir", out.string(), "synth", "--scenario", "fig9"}), kOk);
  const auto in = (out / "measured.csv").string();
  ASSERT_EQ(run({"--out-dir", out.string(), "deconv", "tv", "--in", in, "--out", "tv.csv"}), kOk);
  ASSERT_EQ(run({"--out-dir", out.string(), "deconv", "inverse", "--in", in, "--eps", "1e-3", "--out", "inv.csv"}), kOk);
  EXPECT_EQ(data_rows(out / "tv.csv"), 2000u);
  EXPECT_EQ(data_rows(out / "inv.csv"), 2000u);
  const auto report = load(out / "report.json");
  EXPECT_GT(report.at("iterations_used").get<std::size_t>(), 0u);
}

TEST_F(Cli, NetworkPipeline) {
  const auto model = tiny_model();
  ASSERT_TRUE(fs::exists(model));
  EXPECT_EQ(data_rows(model.parent_path() / "train_log.csv"), 2u);
  const auto out = dir("nn");
  ASSERT_EQ(run({"--out-dir", out.string(), "synth", "--scenario", "fig7"}), kOk);
  ASSERT_EQ(run({"--out-dir", out.string(), "deconv", "nn", "--model", model.string(), "--in",
                 (out / "measured.csv").string(), "--out", "est.csv"}),
            kOk);
  EXPECT_EQ(data_rows(out / "est.csv"), data_rows(out / "measured.csv"));
  ASSERT_EQ(run({"--out-dir", out.string(), "infer", "--model", model.string(), "--in",
                 (out / "measured.csv").string(), "--out", "infer.csv"}),
            kOk);
  EXPECT_EQ(slurp(out / "est.csv"), slurp(out / "infer.csv"));
  ASSERT_EQ(run({"--out-dir", out.string(), "eval", "--estimate", (out / "est.csv").string(), "--label",
                 (out / "truth.csv").string(), "--method", "odnet"}),
            kOk);
  const auto rep = load(out / "report.json");
  EXPECT_EQ(rep.at("method_label"), "odnet");
  EXPECT_EQ(rep.at("window"), json::array({300, 800}));

  const auto sc = dir("scenario");
  ASSERT_EQ(run({"--out-dir", sc.string(), "scenario", "fig9", "--model", model.string(), "--lambda", "2e-4"}), kOk);
  const auto report = load(sc / "report.json");
  ASSERT_EQ(report.at("methods").size(), 3u);
  for (const auto& m : report.at("methods")) EXPECT_TRUE(m.at("detected_events").is_array());
  EXPECT_EQ(report.at("config_echo").at("scenario").at("lambda"), 2e-4);
  EXPECT_EQ(slurp(sc / "curves.csv").substr(0, 32), "index,truth,measured,raw,tvd,odn");
}

TEST_F(Cli, TrainResumeContinues) {
  const auto model = tiny_model();
  const auto d = model.parent_path();
  ASSERT_EQ(run({"--seed", "3", "--out-dir", d.string(), "train", "--data", (d / "dataset.ods").string(),
                 "--resblocks", "1", "--channels", "4", "--kernel", "5", "--epochs", "3", "--batch", "5", "--crop",
                 "128", "--resume", model.string(), "--out", "resumed.odn", "--log", "resumed.csv"}),
            kOk);
  EXPECT_EQ(data_rows(d / "resumed.csv"), 3u);
}

TEST_F(Cli, RerunFromEchoIsBitIdentical) {
  const auto a = dir("a"), b = dir("b");
  ASSERT_EQ(run({"--seed", "11", "--out-dir", a.string(), "synth", "--scenario", "fig9"}), kOk);
  ASSERT_EQ(run({"--config", (a / "config.json").string(), "--out-dir", b.string(), "synth"}), kOk);
  for (const char* f : {"truth.csv", "measured.csv", "pulse.csv"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  auto ea = load(a / "config.json"), eb = load(b / "config.json");
  ea["global"].erase("out_dir");
  eb["global"].erase("out_dir");
  EXPECT_EQ(ea, eb);
}

TEST_F(Cli, FlagOverridesConfigFile) {
  const auto out = dir("override");
  fs::create_directories(out);
  {
    std::ofstream cfg(out / "in.json");
    cfg << R"({"global": {"seed": 5}, "synth": {"scenario": "fig9"}})";
  }
  ASSERT_EQ(run({"--config", (out / "in.json").string(), "--seed", "6", "--out-dir", out.string(), "synth"}), kOk);
  const auto echo = load(out / "config.json");
  EXPECT_EQ(echo.at("global").at("seed"), 6);
  EXPECT_EQ(echo.at("synth").at("scenario"), "fig9");
}

TEST_F(Cli, ValidationErrorsExitOne) {
  const auto out = dir("bad");
  EXPECT_EQ(run({}), kValidationError);
  EXPECT_EQ(run({"frobnicate"}), kValidationError);
  EXPECT_EQ(run({"synth", "--no-such-flag"}), kValidationError);
  EXPECT_EQ(run({"--out-dir", out.string(), "synth", "--scenario", "fig8"}), kValidationError);
  EXPECT_EQ(run({"--out-dir", out.string(), "deconv", "tv", "--in", (out / "missing.csv").string()}),
            kValidationError);
  EXPECT_EQ(run({"--out-dir", out.string(), "synth", "--measured", "../escape.csv"}), kValidationError);
  ASSERT_EQ(run({"--out-dir", out.string(), "synth"}), kOk);
  EXPECT_EQ(run({"--out-dir", out.string(), "deconv", "tv", "--in", (out / "measured.csv").string(), "--lambda",
                 "-1"}),
            kValidationError);
  EXPECT_EQ(run({"--out-dir", out.string(), "deconv", "tv", "--in", (out / "measured.csv").string(), "--lambda",
                 "abc"}),
            kValidationError);
  {
    std::ofstream cfg(out / "unknown.json");
    cfg << R"({"synth": {"scenaro": "fig9"}})";
  }
  EXPECT_EQ(run({"--config", (out / "unknown.json").string(), "--out-dir", out.string(), "synth"}), kValidationError);
  {
    std::ofstream cfg(out / "broken.json");
    cfg << "{ not json";
  }
  EXPECT_EQ(run({"--config", (out / "broken.json").string(), "--out-dir", out.string(), "synth"}), kValidationError);
  EXPECT_EQ(run({"--verbosity", "loud", "--out-dir", out.string(), "synth"}), kValidationError);
}

TEST_F(Cli, RuntimeFailuresExitTwo) {
  const auto out = dir("runtime");
  fs::create_directories(out);
  {
    std::ofstream bad(out / "bad.odn", std::ios::binary);
    bad << "ODN1 this is not a checkpoint";
  }
  ASSERT_EQ(run({"--out-dir", out.string(), "synth"}), kOk);
  EXPECT_EQ(run({"--out-dir", out.string(), "deconv", "nn", "--model", (out / "bad.odn").string(), "--in",
                 (out / "measured.csv").string()}),
            kRuntimeError);
  // a regular file where the output directory should be
  EXPECT_EQ(run({"--out-dir", (out / "measured.csv" / "sub").string(), "synth"}), kRuntimeError);
}

}  // namespace
}  // namespace otdr::cli
