#include "otdr/nn/checkpoint.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <limits>

#include "otdr/error.hpp"

namespace otdr::nn {

namespace {

constexpr std::array<char, 4> kMagic{'O', 'D', 'N', '1'};

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

double number_from(const nlohmann::json& j, double fallback) {
  return j.is_number() ? j.get<double>() : fallback;
}

void write_tensors(std::ostream& out, Network<float>& net) {
  for (const auto& view : tensor_views(net)) {
    const std::uint64_t rank = view.shape.size();
    out.write(reinterpret_cast<const char*>(&rank), sizeof(rank));
    for (std::uint64_t d : view.shape) out.write(reinterpret_cast<const char*>(&d), sizeof(d));
    out.write(reinterpret_cast<const char*>(view.values.data()),
              static_cast<std::streamsize>(view.values.size() * sizeof(float)));
  }
}

void read_tensors(std::istream& in, Network<float>& net, const std::filesystem::path& path) {
  for (auto& view : tensor_views(net)) {
    std::uint64_t rank = 0;
    if (!in.read(reinterpret_cast<char*>(&rank), sizeof(rank))) throw FormatError(path.string() + ": truncated tensor data");
    if (rank != view.shape.size()) throw FormatError(path.string() + ": rank mismatch for " + view.name);
    for (std::size_t d = 0; d < rank; ++d) {
      std::uint64_t dim = 0;
      in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
      if (!in || dim != view.shape[d]) throw FormatError(path.string() + ": shape mismatch for " + view.name);
    }
    if (!in.read(reinterpret_cast<char*>(view.values.data()),
                 static_cast<std::streamsize>(view.values.size() * sizeof(float)))) {
      throw FormatError(path.string() + ": truncated tensor " + view.name);
    }
    for (float v : view.values) {
      if (!std::isfinite(v)) throw FormatError(path.string() + ": non-finite value in " + view.name);
    }
  }
}

nlohmann::json log_to_json(const TrainLog& log) {
  auto arr = nlohmann::json::array();
  for (const auto& r : log.records) {
    arr.push_back({r.epoch, number_or_null(r.train_loss), number_or_null(r.train_psnr), number_or_null(r.val_psnr),
                   r.seconds});
  }
  return arr;
}

TrainLog log_from_json(const nlohmann::json& j) {
  TrainLog log;
  for (const auto& r : j) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    log.records.push_back({r.at(0).get<std::size_t>(), number_from(r.at(1), nan), number_from(r.at(2), nan),
                           number_from(r.at(3), nan), r.at(4).get<double>()});
  }
  return log;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  Checkpoint c = ckpt;
  nlohmann::json tensors = nlohmann::json::array();
  for (const auto& v : tensor_views(c.model)) tensors.push_back({{"name", v.name}, {"shape", v.shape}});
  nlohmann::json sections = {"model"};
  if (c.optimizer) {
    sections.push_back("adam_first_moment");
    sections.push_back("adam_second_moment");
  }
  if (c.best) sections.push_back("best_model");
  const nlohmann::json header = {
      {"format_version", kCheckpointVersion},
      {"arch",
       {{"n_resblocks", c.model.arch.n_resblocks},
        {"channels", c.model.arch.channels},
        {"kernel_size", c.model.arch.kernel_size},
        {"use_bn", c.model.arch.use_bn}}},
      {"epoch", c.epoch},
      {"val_psnr", number_or_null(c.val_psnr)},
      {"best_val_psnr", number_or_null(c.best_val_psnr)},
      {"seed", c.seed},
      {"adam_step", c.optimizer ? c.optimizer->step : 0},
      {"sections", sections},
      {"tensors", tensors},
      {"log", log_to_json(c.log)},
      {"extra", c.extra},
  };
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  const std::uint64_t len = text.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  write_tensors(out, c.model);
  if (c.optimizer) {
    write_tensors(out, c.optimizer->first_moment);
    write_tensors(out, c.optimizer->second_moment);
  }
  if (c.best) write_tensors(out, *c.best);
  if (!out) throw IoError("write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw FormatError(path.string() + ": not an ODN1 checkpoint (bad magic)");
  }
  std::uint64_t len = 0;
  if (!in.read(reinterpret_cast<char*>(&len), sizeof(len)) || len > (std::uint64_t{1} << 28)) {
    throw FormatError(path.string() + ": bad header length");
  }
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len))) throw FormatError(path.string() + ": truncated header");

  Checkpoint c;
  std::vector<std::string> sections;
  try {
    const auto header = nlohmann::json::parse(text);
    const int version = header.at("format_version").get<int>();
    if (version != kCheckpointVersion) {
      throw FormatError(path.string() + ": unsupported checkpoint version " + std::to_string(version));
    }
    const auto& a = header.at("arch");
    NetArchitecture arch{a.at("n_resblocks").get<std::size_t>(), a.at("channels").get<std::size_t>(),
                         a.at("kernel_size").get<std::size_t>(), a.at("use_bn").get<bool>()};
    arch.validate();
    c.model = Network<float>(arch);
    c.epoch = header.at("epoch").get<std::size_t>();
    c.val_psnr = number_from(header.at("val_psnr"), std::numeric_limits<double>::quiet_NaN());
    c.best_val_psnr = number_from(header.at("best_val_psnr"), -std::numeric_limits<double>::infinity());
    c.seed = header.at("seed").get<std::uint64_t>();
    sections = header.at("sections").get<std::vector<std::string>>();
    c.log = log_from_json(header.at("log"));
    c.extra = header.value("extra", nlohmann::json::object());
    if (sections.empty() || sections.front() != "model") throw FormatError(path.string() + ": missing model section");
    read_tensors(in, c.model, path);
    for (std::size_t s = 1; s < sections.size(); ++s) {
      if (sections[s] == "adam_first_moment") {
        c.optimizer = make_adam_state(c.model);
        c.optimizer->step = header.at("adam_step").get<std::uint64_t>();
        read_tensors(in, c.optimizer->first_moment, path);
      } else if (sections[s] == "adam_second_moment") {
        if (!c.optimizer) throw FormatError(path.string() + ": second moment without first moment");
        read_tensors(in, c.optimizer->second_moment, path);
      } else if (sections[s] == "best_model") {
        c.best = Network<float>(arch);
        read_tensors(in, *c.best, path);
      } else {
        throw FormatError(path.string() + ": unknown section '" + sections[s] + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": malformed checkpoint header: " + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(path.string() + ": invalid architecture: " + e.what());
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError(path.string() + ": trailing bytes after tensors");
  return c;
}

}  // namespace otdr::nn
