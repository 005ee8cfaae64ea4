#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "thermo/nn/weight_store.hpp"
#include "thermo/nuc/mode.hpp"
#include "thermo/nuc/multi.hpp"
#include "thermo/train/dataset.hpp"

namespace thermo {

struct TrainLogRow {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_mae = 0.0;
  // Rates in effect during the epoch.
  double lr_sr = 0.0;
  double lr_nuc = 0.0;
};

/// Per-epoch training record, written as `epoch,train_loss,val_mae,lr_sr,lr_nuc`.
struct TrainLog {
  std::vector<TrainLogRow> rows;

  std::string csv() const;
  void save(const std::filesystem::path& path) const;
  friend bool operator==(const TrainLog& a, const TrainLog& b);
};

struct TrainConfig {
  std::size_t scale = 2;
  NucMode mode;
  double lr_sr = 1e-4;
  double lr_nuc = 4e-5;
  // Rate for whichever module pretrain_module trains.
  double pretrain_lr = 1e-3;
  double plateau_factor = 0.5;
  std::size_t plateau_patience = 3;
  double plateau_threshold = 1e-4;
  std::size_t batch_size = 8;
  std::size_t epochs = 60;
  double weight_decay = 1e-2;
  std::uint64_t seed = 0;
  MultiNucOptions multi_options;
  // Called after every epoch (progress reporting).
  std::function<void(const TrainLogRow&)> on_epoch;

  void validate() const;
};

enum class Module { nuc, sr };

class TrainingAborted : public std::runtime_error {
 public:
  TrainingAborted(std::size_t epoch, std::size_t batch, const std::string& what);
  std::size_t epoch() const { return epoch_; }
  std::size_t batch() const { return batch_; }

 private:
  std::size_t epoch_;
  std::size_t batch_;
};

struct TrainResult {
  // NUC and SR records together ("nuc." and "sr." prefixes).
  WeightStore weights;
  WeightStore best_weights;
  TrainLog log;
  double best_val_mae = 0.0;
  std::size_t best_epoch = 0;
};

// Default-architecture NUC + SR weights for config.mode / config.scale.
WeightStore default_pipeline_weights(const TrainConfig& config);

// Fine-tunes NUC and SR jointly with one optimizer each. Without pretrained
// weights, starts from default_pipeline_weights.
TrainResult train_end_to_end(const TrainConfig& config, const Dataset& dataset,
                             const std::optional<WeightStore>& pretrained = std::nullopt);

// Trains one module alone: NUC maps gray levels to the input-grid ground
// truth (MAE); SR maps clean downscaled ground truth to full resolution
// (MAE + SSIM term). `init` holds that module's starting weights.
TrainResult pretrain_module(Module which, const TrainConfig& config, const Dataset& dataset, const WeightStore& init);

/// Affine mean-temperature estimator fitted by least squares.
struct MeanEstimatorFit {
  MeanFeatures weights{};
  double bias = 0.0;
};

MeanEstimatorFit fit_mean_estimator(const std::vector<MeanFeatures>& features, const std::vector<double>& targets);

// Replaces the estimator records of a multi NUC store with a least-squares fit on `pairs`.
void pretrain_mean_estimator(WeightStore& nuc, const std::vector<TrainingPair>& pairs, const MultiNucOptions& options);

}  // namespace thermo
