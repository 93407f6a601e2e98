#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <vector>

#include "otdr/datagen.hpp"
#include "otdr/nn/adam.hpp"
#include "otdr/nn/network.hpp"

namespace otdr::nn {

struct TrainConfig {
  std::size_t epochs = 800;
  std::size_t batch_size = 64;
  AdamConfig adam{};
  std::size_t crop_len = 2048;
  std::uint64_t seed = 0;
  std::size_t checkpoint_every = 0;  // 0 disables periodic checkpoints
  std::filesystem::path checkpoint_path;
  // Training-set PSNR is evaluated on the first N training curves (0 = all).
  std::size_t train_eval_limit = 0;
  double psnr_peak = 1.0;

  void validate(const NetArchitecture& arch, std::size_t samples_per_curve) const;
};

struct EpochRecord {
  std::size_t epoch;
  double train_loss;
  double train_psnr;
  double val_psnr;
  double seconds;
};

struct TrainLog {
  std::vector<EpochRecord> records;
};

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Checkpoint;

// Per-curve PSNR averaged over the set, full-length curves, eval mode.
double average_psnr(Network<float>& net, const std::vector<data::Curve>& curves, std::size_t limit,
                    double peak, std::size_t batch);

// Epoch loop: seeded shuffle, one random crop per curve, minibatches of
// batch_size, MSE, backward, Adam. After each epoch the model is scored on
// the full-length train/val curves and the best-val model is retained.
// Gradients are reduced in a fixed order, so a run is bitwise reproducible.
class Trainer {
 public:
  using Progress = std::function<void(const EpochRecord&)>;

  Trainer(Network<float> model, const data::InMemoryDataset& data, TrainConfig cfg);
  Trainer(const Checkpoint& resume_from, const data::InMemoryDataset& data, TrainConfig cfg);

  EpochRecord run_epoch();
  void run(const Progress& progress = {});  // until cfg.epochs

  std::size_t epoch() const noexcept { return epoch_; }
  const Network<float>& model() const noexcept { return model_; }
  const Network<float>& best_model() const noexcept { return best_; }
  double best_val_psnr() const noexcept { return best_val_psnr_; }
  const TrainLog& log() const noexcept { return log_; }
  const AdamState<float>& optimizer() const noexcept { return adam_; }

  Checkpoint checkpoint() const;

 private:
  double train_batch(const std::vector<std::size_t>& indices, const std::vector<std::size_t>& offsets);

  Network<float> model_;
  Network<float> best_;
  AdamState<float> adam_;
  const data::InMemoryDataset& data_;
  TrainConfig cfg_;
  std::size_t epoch_ = 0;
  double best_val_psnr_;
  TrainLog log_;
};

std::pair<Network<float>, TrainLog> train(Network<float> model, const data::InMemoryDataset& data,
                                          const TrainConfig& cfg, const Trainer::Progress& progress = {});

void write_train_log_csv(const std::filesystem::path& path, const TrainLog& log);

}  // namespace otdr::nn
