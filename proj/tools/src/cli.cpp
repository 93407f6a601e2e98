#include "otdr/cli/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "otdr/cli/params.hpp"
#include "otdr/convolution.hpp"
#include "otdr/datagen.hpp"
#include "otdr/error.hpp"
#include "otdr/eval.hpp"
#include "otdr/nn/checkpoint.hpp"
#include "otdr/nn/network.hpp"
#include "otdr/nn/trainer.hpp"
#include "otdr/rng.hpp"
#include "otdr/scenario.hpp"
#include "otdr/synth.hpp"
#include "otdr/trace_io.hpp"
#include "otdr/tvd.hpp"
#include "otdr/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace otdr::cli {

namespace {

using u64 = std::uint64_t;

// RNG stream of the global seed used for weight initialization.
constexpr u64 kInitStream = 0x1417;

// What a handler sees: the effective global and subcommand parameters.
struct Context {
  std::string command;
  std::string section;
  json global;
  json params;

  fs::path out_dir() const { return global.at("out_dir").get<std::string>(); }
  u64 seed() const { return global.at("seed").get<u64>(); }
  const json& operator[](const char* key) const { return params.at(key); }
  std::string str(const char* key) const { return params.at(key).get<std::string>(); }
  double num(const char* key) const { return params.at(key).get<double>(); }
  std::size_t count(const char* key) const { return params.at(key).get<std::size_t>(); }

  json echo() const {
    json j = {{"tool", "otdr"}, {"version", kVersion}, {"command", command}, {"global", global}};
    j[section] = params;
    return j;
  }
};

fs::path input_path(const Context& ctx, const char* key) {
  const std::string p = ctx.str(key);
  if (p.empty()) throw UsageError("--" + std::string(key) + " is required");
  if (!fs::exists(p)) throw UsageError("input file not found: " + p);
  return p;
}

// Output files always land under --out-dir.
fs::path output_path(const Context& ctx, const char* key) {
  const std::string name = ctx.str(key);
  if (name.empty()) throw UsageError("--" + std::string(key) + " must not be empty");
  const fs::path dir = fs::absolute(ctx.out_dir()).lexically_normal();
  const fs::path full = (dir / name).lexically_normal();
  const auto rel = full.lexically_relative(dir);
  if (rel.empty() || *rel.begin() == "..") {
    throw UsageError("output " + name + " is outside the output directory " + dir.string());
  }
  return full;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

void write_json(const fs::path& path, const json& j) {
  ensure_dir(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void write_echo(const Context& ctx) {
  ensure_dir(fs::absolute(ctx.out_dir()));
  write_json(fs::absolute(ctx.out_dir()) / "config.json", ctx.echo());
}

PulseProfile pulse_from(const Context& ctx) {
  const double dt = ctx.num("dt");
  const std::string file = ctx.str("pulse");
  if (!file.empty()) {
    if (!fs::exists(file)) throw UsageError("pulse file not found: " + file);
    return read_pulse_csv(file, dt);
  }
  return parametric_pulse(ctx.num("pulse_width") * 1e-9, ctx.num("rise_fraction"), dt);
}

std::string pulse_description(const Context& ctx) {
  const std::string file = ctx.str("pulse");
  if (!file.empty()) return "file:" + file;
  return "parametric:width_ns=" + ctx["pulse_width"].dump() + ",rise_fraction=" + ctx["rise_fraction"].dump();
}

void add_pulse_params(ParamSet& p) {
  p.add("pulse", "", "Pulse profile CSV (index,amplitude); overrides --pulse-width");
  p.add("pulse_width", 100.0, "Parametric pulse width in ns");
  p.add("rise_fraction", 0.0, "Parametric pulse edge length as a fraction of the width");
}

eval::DetectorConfig detector_from(const Context& ctx) {
  eval::DetectorConfig d;
  d.step_threshold = ctx.num("step_threshold");
  d.spike_threshold = ctx.num("spike_threshold");
  d.baseline_window = ctx.count("baseline_window");
  d.step_span = ctx.count("step_span");
  d.validate();
  return d;
}

void add_detector_params(ParamSet& p) {
  const eval::DetectorConfig d;
  p.add("step_threshold", d.step_threshold, "Minimum level change reported as a step");
  p.add("spike_threshold", d.spike_threshold, "Minimum height above baseline reported as a spike");
  p.add("baseline_window", std::size_t{d.baseline_window}, "Running-median baseline width (odd)");
  p.add("step_span", std::size_t{d.step_span}, "Samples a level change must persist");
}

tvd::TvdConfig tvd_from(const Context& ctx) {
  tvd::TvdConfig c;
  c.lambda = ctx.num("lambda");
  c.norm_p = static_cast<int>(ctx.count("norm"));
  c.max_iters = ctx.count("iters");
  c.tol = ctx.num("tol");
  c.rho = ctx.num("rho");
  const std::string b = ctx.str("boundary");
  if (b == "circular") {
    c.boundary = tvd::Boundary::circular;
  } else if (b == "zero_padded") {
    c.boundary = tvd::Boundary::zero_padded;
  } else {
    throw ConfigError("boundary must be circular or zero_padded, got " + b);
  }
  if (ctx.count("pad") > 0) c.pad_len = ctx.count("pad");
  c.validate();
  return c;
}

void add_tvd_params(ParamSet& p) {
  const tvd::TvdConfig c;
  p.add("lambda", c.lambda, "TV regularization weight");
  p.add("norm", std::size_t{2}, "Fidelity norm p (1 or 2)");
  p.add("iters", std::size_t{c.max_iters}, "Maximum ADMM iterations");
  p.add("tol", c.tol, "Relative-change stopping tolerance");
  p.add("rho", c.rho, "ADMM penalty");
  p.add("boundary", "zero_padded", "Boundary handling: circular or zero_padded");
  p.add("pad", std::size_t{0}, "Zero-pad length per side (0 = twice the pulse length)");
}

std::shared_ptr<const nn::Network<float>> load_model(const fs::path& path) {
  auto ckpt = nn::load_checkpoint(path);
  spdlog::info("loaded model {} ({} blocks, {} channels, kernel {}, bn {}, epoch {})", path.string(),
               ckpt.model.arch.n_resblocks, ckpt.model.arch.channels, ckpt.model.arch.kernel_size,
               ckpt.model.arch.use_bn, ckpt.epoch);
  return std::make_shared<const nn::Network<float>>(nn::inference_model(ckpt));
}

// ---- subcommands ----

int run_synth(const Context& ctx) {
  const auto name = scenario::parse_name(ctx.str("scenario"));
  spdlog::info("synth scenario {} seed {}", scenario::to_string(name), ctx.seed());
  const auto data = scenario::build(name, ctx.seed());
  write_echo(ctx);
  write_trace_csv(output_path(ctx, "truth"), data.truth);
  write_trace_csv(output_path(ctx, "measured"), data.measured);
  write_pulse_csv(output_path(ctx, "pulse_out"), data.pulse);
  return kOk;
}

std::pair<std::size_t, std::size_t> parse_split(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) throw ConfigError("split must look like TRAIN/VAL, got " + s);
  try {
    std::size_t used = 0;
    const auto a = std::stoull(s.substr(0, slash), &used);
    if (used != slash) throw ConfigError("bad split " + s);
    const auto rest = s.substr(slash + 1);
    const auto b = std::stoull(rest, &used);
    if (used != rest.size()) throw ConfigError("bad split " + s);
    return {a, b};
  } catch (const std::logic_error&) {
    throw ConfigError("split must look like TRAIN/VAL, got " + s);
  }
}

int run_datagen(const Context& ctx) {
  data::DatasetManifest m;
  m.n_pairs = ctx.count("pairs");
  m.samples_per_curve = ctx.count("len");
  std::tie(m.train_count, m.val_count) = parse_split(ctx.str("split"));
  m.noise_sigma = ctx.num("noise");
  m.generator_seed = ctx.seed();
  m.dt = ctx.num("dt");
  m.runs = {ctx.count("min_run"), ctx.count("max_run")};
  m.levels = {ctx.num("level_lo"), ctx.num("level_hi")};
  const std::string fmt = ctx.str("format");
  if (fmt == "f64") {
    m.sample_format = data::SampleFormat::f64;
  } else if (fmt == "f32") {
    m.sample_format = data::SampleFormat::f32;
  } else {
    throw ConfigError("format must be f64 or f32, got " + fmt);
  }
  m.pulse_source = pulse_description(ctx);
  m.validate();
  const auto pulse = pulse_from(ctx);
  const auto out = output_path(ctx, "out");

  spdlog::info("datagen {} pairs x {} samples, pulse {} ({} taps), seed {}", m.n_pairs, m.samples_per_curve,
               m.pulse_source, pulse.size(), m.generator_seed);
  write_echo(ctx);
  data::generate_dataset(m, pulse, out);
  spdlog::info("wrote {}", out.string());
  return kOk;
}

int run_train(const Context& ctx) {
  const auto data_path = input_path(ctx, "data");
  nn::NetArchitecture arch;
  arch.n_resblocks = ctx.count("resblocks");
  arch.channels = ctx.count("channels");
  arch.kernel_size = ctx.count("kernel");
  arch.use_bn = ctx["bn"].get<bool>();
  arch.validate();

  nn::TrainConfig cfg;
  cfg.epochs = ctx.count("epochs");
  cfg.batch_size = ctx.count("batch");
  cfg.adam.learning_rate = ctx.num("lr");
  cfg.crop_len = ctx.count("crop");
  cfg.seed = ctx.seed();
  cfg.checkpoint_every = ctx.count("checkpoint_every");
  cfg.train_eval_limit = ctx.count("train_eval_limit");
  const auto out = output_path(ctx, "out");
  const auto log_path = output_path(ctx, "log");
  cfg.checkpoint_path = out;

  const auto ds = data::load_dataset(data_path);
  cfg.validate(arch, ds.manifest.samples_per_curve);
  write_echo(ctx);

  std::unique_ptr<nn::Trainer> trainer;
  const std::string resume = ctx.str("resume");
  if (!resume.empty()) {
    if (!fs::exists(resume)) throw UsageError("checkpoint not found: " + resume);
    const auto ckpt = nn::load_checkpoint(resume);
    spdlog::info("resuming from {} at epoch {}", resume, ckpt.epoch);
    trainer = std::make_unique<nn::Trainer>(ckpt, ds, cfg);
  } else {
    spdlog::info("training {} blocks x {} channels, kernel {} (receptive field {}), bn {}, seed {}",
                 arch.n_resblocks, arch.channels, arch.kernel_size, arch.receptive_field(), arch.use_bn, cfg.seed);
    trainer = std::make_unique<nn::Trainer>(nn::make_network<float>(arch, derive_seed(cfg.seed, kInitStream)), ds, cfg);
  }
  trainer->run([](const nn::EpochRecord& r) {
    spdlog::info("epoch {:4d}  loss {:.6g}  train {:.3f} dB  val {:.3f} dB  ({:.1f}s)", r.epoch, r.train_loss,
                 r.train_psnr, r.val_psnr, r.seconds);
  });
  auto ckpt = trainer->checkpoint();
  ckpt.extra = ctx.echo();
  nn::save_checkpoint(out, ckpt);
  nn::write_train_log_csv(log_path, trainer->log());
  spdlog::info("best val PSNR {:.3f} dB; wrote {}", trainer->best_val_psnr(), out.string());
  return kOk;
}

int run_infer(const Context& ctx) {
  const auto model = load_model(input_path(ctx, "model"));
  const auto in = read_trace_csv(input_path(ctx, "in"), ctx.num("dt"));
  const auto out = output_path(ctx, "out");
  const Trace est = scenario::odnet_method(model).run(in, PulseProfile::impulse(in.dt()));
  write_echo(ctx);
  write_trace_csv(out, est);
  return kOk;
}

int run_deconv_tv(const Context& ctx) {
  const auto in = read_trace_csv(input_path(ctx, "in"), ctx.num("dt"));
  const auto pulse = pulse_from(ctx);
  const auto cfg = tvd_from(ctx);
  const auto out = output_path(ctx, "out");
  const auto report_path = output_path(ctx, "report");
  spdlog::info("tv deconvolution of {} samples, lambda {}, p {}", in.size(), cfg.lambda, cfg.norm_p);
  const auto r = tvd::tv_deconvolve(in, pulse, cfg);
  spdlog::info("{} iterations, converged {}", r.iterations_used, r.converged);
  write_echo(ctx);
  write_trace_csv(out, r.estimate);
  write_json(report_path, {{"iterations_used", r.iterations_used},
                           {"converged", r.converged},
                           {"final_objective", r.objective_trace.empty() ? 0.0 : r.objective_trace.back()},
                           {"objective_trace", r.objective_trace},
                           {"config", ctx.echo()}});
  return kOk;
}

int run_deconv_inverse(const Context& ctx) {
  const auto in = read_trace_csv(input_path(ctx, "in"), ctx.num("dt"));
  const auto pulse = pulse_from(ctx);
  const auto out = output_path(ctx, "out");
  const double eps = ctx.num("eps");
  if (eps < 0.0) throw ConfigError("eps must be non-negative");
  const auto est = tvd::inverse_filter(in, pulse, eps);
  write_echo(ctx);
  write_trace_csv(out, est);
  return kOk;
}

int run_eval(const Context& ctx) {
  const double dt = ctx.num("dt");
  const auto est = read_trace_csv(input_path(ctx, "estimate"), dt);
  const auto label = read_trace_csv(input_path(ctx, "label"), dt);
  const auto det = detector_from(ctx);
  const eval::Window w{ctx.count("window_start"), ctx.count("window_end")};
  const auto out = output_path(ctx, "report");
  auto rep = eval::evaluate(ctx.str("method"), est, label, w, det, ctx.num("peak"));
  spdlog::info("{}: PSNR {:.3f} dB, residual std {:.6g} over [{}, {}], {} events", rep.method_label, rep.psnr_db,
               rep.residual_std, w.start, w.end, rep.detected_events.size());
  write_echo(ctx);
  json j = eval::to_json(rep);
  j["config"] = ctx.echo();
  write_json(out, j);
  return kOk;
}

int run_scenario(const Context& ctx) {
  const auto name = scenario::parse_name(ctx.str("name"));
  const auto det = detector_from(ctx);
  std::vector<scenario::Method> methods{scenario::raw_method(), scenario::tvd_method(tvd_from(ctx))};
  if (ctx["inverse"].get<bool>()) methods.push_back(scenario::inverse_method(ctx.num("inverse_eps")));
  const std::string model = ctx.str("model");
  if (!model.empty()) methods.push_back(scenario::odnet_method(load_model(input_path(ctx, "model"))));
  const auto report_path = output_path(ctx, "report");
  const auto curves_path = output_path(ctx, "curves");

  spdlog::info("scenario {} seed {} with {} methods", scenario::to_string(name), ctx.seed(), methods.size());
  const auto result = scenario::run(name, methods, ctx.seed(), det);
  for (const auto& m : result.report.methods) {
    spdlog::info("  {:8s} PSNR {:8.3f} dB  residual std {:.6g}  events in roi {}", m.method_label, m.psnr_db,
                 m.residual_std, m.extras.at("events_in_roi").get<std::size_t>());
  }
  write_echo(ctx);
  json j = scenario::to_json(result);
  j["config_echo"] = ctx.echo();
  write_json(report_path, j);
  scenario::write_curves_csv(curves_path, result);
  return kOk;
}

// ---- wiring ----

struct Command {
  std::string name;  // as echoed, e.g. "deconv tv"
  std::unique_ptr<ParamSet> params;
  std::function<int(const Context&)> run;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  if (!fs::exists(path)) throw UsageError("config file not found: " + path);
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
}

void setup_logging(const std::string& level) {
  auto logger = spdlog::get("otdr");
  if (!logger) logger = spdlog::stderr_logger_st("otdr");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S] [%l] %v");
  const auto lvl = spdlog::level::from_str(level);
  if (lvl == spdlog::level::off && level != "off") throw ConfigError("unknown verbosity " + level);
  spdlog::set_level(lvl);
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"Pulse deconvolution toolkit for OTDR traces", "otdr"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  ParamSet global(&app, "global");
  global.add("seed", u64{0}, "Seed for every stochastic step");
  global.add("out_dir", ".", "Directory receiving all outputs");
  global.add("verbosity", "info", "Log level: trace, debug, info, warn, error, off");

  std::vector<Command> commands;
  auto add_command = [&](CLI::App* sub, std::string name, std::string section, auto run) -> ParamSet& {
    sub->fallthrough();
    commands.push_back({std::move(name), std::make_unique<ParamSet>(sub, std::move(section)), run});
    return *commands.back().params;
  };

  {
    auto& p = add_command(app.add_subcommand("synth", "Synthesize a scenario's truth and measured traces"), "synth",
                          "synth", run_synth);
    p.add("scenario", "fig7", "fig7, fig9 or end_reflection");
    p.add("truth", "truth.csv", "Ground-truth trace output");
    p.add("measured", "measured.csv", "Measured trace output");
    p.add("pulse_out", "pulse.csv", "Pulse profile output");
  }
  {
    auto& p = add_command(app.add_subcommand("datagen", "Generate a synthetic training corpus"), "datagen", "datagen",
                          run_datagen);
    const data::DatasetManifest m;
    p.add("pairs", std::size_t{m.n_pairs}, "Number of (input, label) pairs");
    p.add("len", std::size_t{m.samples_per_curve}, "Samples per curve");
    p.add("split", std::to_string(m.train_count) + "/" + std::to_string(m.val_count), "TRAIN/VAL pair counts");
    p.add("noise", m.noise_sigma, "Noise standard deviation");
    add_pulse_params(p);
    p.add("dt", m.dt, "Sampling interval in seconds");
    p.add("min_run", std::size_t{m.runs.min}, "Shortest constant run");
    p.add("max_run", std::size_t{m.runs.max}, "Longest constant run");
    p.add("level_lo", m.levels.lo, "Lowest label level");
    p.add("level_hi", m.levels.hi, "Highest label level");
    p.add("format", "f64", "Sample storage: f64 or f32");
    p.add("out", "dataset.ods", "Dataset file");
  }
  {
    auto& p = add_command(app.add_subcommand("train", "Train a network on a dataset"), "train", "train", run_train);
    const nn::NetArchitecture a;
    const nn::TrainConfig c;
    p.add("data", "", "Dataset file from datagen");
    p.add("resblocks", std::size_t{a.n_resblocks}, "Residual blocks");
    p.add("channels", std::size_t{a.channels}, "Channels per convolution");
    p.add("kernel", std::size_t{a.kernel_size}, "Kernel size (odd)");
    p.add("bn", a.use_bn, "Batch normalization inside residual blocks");
    p.add("epochs", std::size_t{c.epochs}, "Epochs");
    p.add("batch", std::size_t{c.batch_size}, "Batch size");
    p.add("lr", c.adam.learning_rate, "Adam learning rate");
    p.add("crop", std::size_t{c.crop_len}, "Random crop length per curve");
    p.add("checkpoint_every", std::size_t{0}, "Write a checkpoint every N epochs (0 = only at the end)");
    p.add("train_eval_limit", std::size_t{0}, "Score train PSNR on the first N curves (0 = all)");
    p.add("resume", "", "Checkpoint to resume from");
    p.add("out", "model.odn", "Checkpoint output");
    p.add("log", "train_log.csv", "Training log output");
  }
  auto add_nn = [&](CLI::App* sub, std::string name, std::string section) {
    auto& p = add_command(sub, std::move(name), std::move(section), run_infer);
    p.add("model", "", "Model checkpoint");
    p.add("in", "", "Input trace CSV");
    p.add("dt", kDefaultDt, "Sampling interval of the input CSV");
    p.add("out", "est.csv", "Estimate output");
  };
  add_nn(app.add_subcommand("infer", "Run a trained network on a trace"), "infer", "infer");
  {
    auto* deconv = app.add_subcommand("deconv", "Deconvolve a trace");
    deconv->require_subcommand(1);
    deconv->fallthrough();
    {
      auto& p = add_command(deconv->add_subcommand("tv", "Total-variation deconvolution"), "deconv tv", "deconv_tv",
                            run_deconv_tv);
      p.add("in", "", "Input trace CSV");
      add_pulse_params(p);
      p.add("dt", kDefaultDt, "Sampling interval of the input CSV");
      add_tvd_params(p);
      p.add("out", "est.csv", "Estimate output");
      p.add("report", "report.json", "Solver report output");
    }
    {
      auto& p = add_command(deconv->add_subcommand("inverse", "Frequency-domain inverse filter"), "deconv inverse",
                            "deconv_inverse", run_deconv_inverse);
      p.add("in", "", "Input trace CSV");
      add_pulse_params(p);
      p.add("dt", kDefaultDt, "Sampling interval of the input CSV");
      p.add("eps", 0.0, "Regularization added to |H|^2");
      p.add("out", "est.csv", "Estimate output");
    }
    add_nn(deconv->add_subcommand("nn", "Network deconvolution"), "deconv nn", "deconv_nn");
  }
  {
    auto& p = add_command(app.add_subcommand("eval", "Score an estimate against a label"), "eval", "eval", run_eval);
    p.add("estimate", "", "Estimate trace CSV");
    p.add("label", "", "Label trace CSV");
    p.add("dt", kDefaultDt, "Sampling interval of the CSVs");
    p.add("method", "estimate", "Label for the report");
    p.add("window_start", std::size_t{300}, "Residual window start (inclusive)");
    p.add("window_end", std::size_t{800}, "Residual window end (inclusive)");
    p.add("peak", 1.0, "PSNR peak value");
    add_detector_params(p);
    p.add("report", "report.json", "Report output");
  }
  {
    auto& p = add_command(app.add_subcommand("scenario", "Run methods on a named scenario and compare"), "scenario",
                          "scenario", run_scenario);
    p.add_positional("name", "", "fig7, fig9 or end_reflection");
    p.add("model", "", "Model checkpoint (adds the network to the comparison)");
    add_tvd_params(p);
    p.add("inverse", false, "Include the regularized inverse filter");
    p.add("inverse_eps", 1e-3, "Inverse filter regularization");
    add_detector_params(p);
    p.add("report", "report.json", "Report output");
    p.add("curves", "curves.csv", "Curves CSV output");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kValidationError;
  }

  const Command* chosen = nullptr;
  for (const auto& c : commands) {
    if (c.params->app()->parsed()) chosen = &c;
  }
  if (!chosen) {
    std::cerr << app.help();
    return kValidationError;
  }

  try {
    const json file = load_config(config_path);
    Context ctx{chosen->name, chosen->params->section(), global.resolve(file), chosen->params->resolve(file)};
    setup_logging(ctx.global.at("verbosity").get<std::string>());
    return chosen->run(ctx);
  } catch (const std::logic_error& e) {
    std::cerr << "otdr: " << e.what() << '\n';
    return kValidationError;
  } catch (const json::exception& e) {
    std::cerr << "otdr: invalid parameter: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    std::cerr << "otdr: " << e.what() << '\n';
    return kRuntimeError;
  }
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args);
}

}  // namespace otdr::cli
