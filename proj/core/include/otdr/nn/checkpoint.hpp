#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "otdr/nn/adam.hpp"
#include "otdr/nn/network.hpp"
#include "otdr/nn/trainer.hpp"

namespace otdr::nn {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  Network<float> model;
  std::size_t epoch = 0;
  double val_psnr = 0.0;
  std::uint64_t seed = 0;
  std::optional<AdamState<float>> optimizer;
  std::optional<Network<float>> best;
  double best_val_psnr = 0.0;
  TrainLog log;
  nlohmann::json extra = nlohmann::json::object();
};

// "ODN1", u64 header length, JSON header (architecture, epoch, val PSNR,
// seed, format_version, tensor manifest), then every tensor in declaration
// order as u64 rank, rank x u64 dims, f32 little-endian values. Optimizer
// moments and the best-so-far model follow the model tensors when present.
// The model to deploy: the best-validation snapshot when one was stored.
inline const Network<float>& inference_model(const Checkpoint& c) { return c.best ? *c.best : c.model; }

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace otdr::nn
