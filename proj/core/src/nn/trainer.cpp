#include "otdr/nn/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "otdr/error.hpp"
#include "otdr/metrics.hpp"
#include "otdr/nn/checkpoint.hpp"
#include "otdr/rng.hpp"

namespace otdr::nn {

void TrainConfig::validate(const NetArchitecture& arch, std::size_t samples_per_curve) const {
  if (!(adam.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (batch_size < 1) throw ConfigError("batch size must be at least 1");
  if (crop_len < arch.receptive_field()) {
    throw ConfigError("crop length " + std::to_string(crop_len) + " is shorter than the receptive field " +
                      std::to_string(arch.receptive_field()));
  }
  if (crop_len > samples_per_curve) {
    throw ConfigError("crop length " + std::to_string(crop_len) + " exceeds the curve length " +
                      std::to_string(samples_per_curve));
  }
  if (checkpoint_every > 0 && checkpoint_path.empty()) {
    throw ConfigError("periodic checkpoints need a checkpoint path");
  }
  if (!(psnr_peak > 0.0)) throw ConfigError("PSNR peak must be positive");
}

double average_psnr(Network<float>& net, const std::vector<data::Curve>& curves, std::size_t limit,
                    double peak, std::size_t batch) {
  const std::size_t n = limit == 0 ? curves.size() : std::min(limit, curves.size());
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t len = curves.front().input.size();
  double total = 0.0;
  for (std::size_t start = 0; start < n; start += batch) {
    const std::size_t count = std::min(batch, n - start);
    Matrix<float> x(1, static_cast<Eigen::Index>(count * len));
    for (std::size_t b = 0; b < count; ++b) {
      std::copy(curves[start + b].input.begin(), curves[start + b].input.end(), x.data() + b * len);
    }
    const Matrix<float> y = forward(net, x, len, Mode::eval);
    for (std::size_t b = 0; b < count; ++b) {
      const std::span<const float> est(y.data() + b * len, len);
      total += psnr_from_mse(mean_squared_error<float, float>(est, curves[start + b].label), peak);
    }
  }
  return total / static_cast<double>(n);
}

namespace {

std::size_t curve_length(const data::InMemoryDataset& data) {
  if (data.train.empty()) throw DomainError("training set is empty");
  return data.train.front().input.size();
}

}  // namespace

Trainer::Trainer(Network<float> model, const data::InMemoryDataset& data, TrainConfig cfg)
    : model_(std::move(model)),
      best_(model_),
      adam_(make_adam_state(model_)),
      data_(data),
      cfg_(std::move(cfg)),
      best_val_psnr_(-std::numeric_limits<double>::infinity()) {
  cfg_.validate(model_.arch, curve_length(data_));
}

Trainer::Trainer(const Checkpoint& ckpt, const data::InMemoryDataset& data, TrainConfig cfg)
    : model_(ckpt.model),
      best_(ckpt.best.value_or(ckpt.model)),
      adam_(ckpt.optimizer.value_or(make_adam_state(ckpt.model))),
      data_(data),
      cfg_(std::move(cfg)),
      epoch_(ckpt.epoch),
      best_val_psnr_(ckpt.best_val_psnr),
      log_(ckpt.log) {
  cfg_.validate(model_.arch, curve_length(data_));
}

double Trainer::train_batch(const std::vector<std::size_t>& indices, const std::vector<std::size_t>& offsets) {
  const std::size_t crop = cfg_.crop_len;
  const auto cols = static_cast<Eigen::Index>(indices.size() * crop);
  Matrix<float> x(1, cols), label(1, cols);
  for (std::size_t b = 0; b < indices.size(); ++b) {
    const auto& curve = data_.train[indices[b]];
    const auto off = static_cast<std::ptrdiff_t>(offsets[b]);
    std::copy(curve.input.begin() + off, curve.input.begin() + off + static_cast<std::ptrdiff_t>(crop),
              x.data() + b * crop);
    std::copy(curve.label.begin() + off, curve.label.begin() + off + static_cast<std::ptrdiff_t>(crop),
              label.data() + b * crop);
  }
  ForwardCache<float> cache;
  const Matrix<float> y = forward(model_, x, crop, Mode::train, &cache);
  Matrix<float> dy;
  const float loss = mse_loss(y, label, &dy);
  if (!std::isfinite(loss)) return loss;
  auto grads = backward(model_, cache, dy);
  adam_step(model_, grads.params, adam_, cfg_.adam);
  return loss;
}

EpochRecord Trainer::run_epoch() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t len = curve_length(data_);
  Rng rng = make_rng(derive_seed(cfg_.seed, epoch_));
  std::vector<std::size_t> order(data_.train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_int_distribution<std::size_t> offset_dist(0, len - cfg_.crop_len);
  std::vector<std::size_t> offsets(order.size());
  for (auto& o : offsets) o = offset_dist(rng);

  double loss_sum = 0.0;
  for (std::size_t start = 0; start < order.size(); start += cfg_.batch_size) {
    const std::size_t end = std::min(order.size(), start + cfg_.batch_size);
    const std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(start),
                                       order.begin() + static_cast<std::ptrdiff_t>(end));
    const std::vector<std::size_t> off(offsets.begin() + static_cast<std::ptrdiff_t>(start),
                                       offsets.begin() + static_cast<std::ptrdiff_t>(end));
    const double loss = train_batch(idx, off);
    if (!std::isfinite(loss)) {
      std::string where;
      if (!cfg_.checkpoint_path.empty()) {
        auto diag = cfg_.checkpoint_path;
        diag += ".diverged";
        save_checkpoint(diag, checkpoint());
        where = "; diagnostic checkpoint written to " + diag.string();
      }
      throw TrainingDiverged("training loss became non-finite in epoch " + std::to_string(epoch_ + 1) +
                             " at batch starting " + std::to_string(start) + where);
    }
    loss_sum += loss * static_cast<double>(end - start);
  }

  EpochRecord rec{};
  rec.epoch = ++epoch_;
  rec.train_loss = loss_sum / static_cast<double>(order.size());
  rec.train_psnr = average_psnr(model_, data_.train, cfg_.train_eval_limit, cfg_.psnr_peak, cfg_.batch_size);
  rec.val_psnr = average_psnr(model_, data_.val, 0, cfg_.psnr_peak, cfg_.batch_size);
  const double score = data_.val.empty() ? rec.train_psnr : rec.val_psnr;
  if (score > best_val_psnr_) {
    best_val_psnr_ = score;
    best_ = model_;
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  log_.records.push_back(rec);

  if (cfg_.checkpoint_every > 0 && epoch_ % cfg_.checkpoint_every == 0) {
    save_checkpoint(cfg_.checkpoint_path, checkpoint());
  }
  return rec;
}

void Trainer::run(const Progress& progress) {
  while (epoch_ < cfg_.epochs) {
    const auto rec = run_epoch();
    if (progress) progress(rec);
  }
}

Checkpoint Trainer::checkpoint() const {
  Checkpoint c;
  c.model = model_;
  c.epoch = epoch_;
  c.val_psnr = log_.records.empty() ? std::numeric_limits<double>::quiet_NaN() : log_.records.back().val_psnr;
  c.seed = cfg_.seed;
  c.optimizer = adam_;
  c.best = best_;
  c.best_val_psnr = best_val_psnr_;
  c.log = log_;
  return c;
}

std::pair<Network<float>, TrainLog> train(Network<float> model, const data::InMemoryDataset& data,
                                          const TrainConfig& cfg, const Trainer::Progress& progress) {
  Trainer trainer(std::move(model), data, cfg);
  trainer.run(progress);
  return {trainer.best_model(), trainer.log()};
}

void write_train_log_csv(const std::filesystem::path& path, const TrainLog& log) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.precision(17);
  out << "epoch,train_loss,train_psnr,val_psnr,seconds\n";
  for (const auto& r : log.records) {
    out << r.epoch << ',' << r.train_loss << ',' << r.train_psnr << ',' << r.val_psnr << ',' << r.seconds << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace otdr::nn
