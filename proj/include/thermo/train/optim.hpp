#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "thermo/nn/weight_store.hpp"

namespace thermo {

/// Adam moments with decoupled weight decay (AdamW).
struct OptimState {
  std::map<std::string, std::vector<double>> m;
  std::map<std::string, std::vector<double>> v;
  std::size_t step = 0;
};

class AdamW {
 public:
  explicit AdamW(double lr, double weight_decay = 1e-2, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  // One update of every parameter that has an entry in grads.
  void step(TensorMap<float>& params, const std::map<std::string, std::vector<double>>& grads);

  double lr() const { return lr_; }
  void set_lr(double lr);
  const OptimState& state() const { return state_; }

 private:
  double lr_;
  double weight_decay_;
  double beta1_;
  double beta2_;
  double eps_;
  OptimState state_;
};

/// Multiplies learning rates by `factor` once `patience` consecutive epochs
/// fail to improve the best validation MAE by more than `threshold`.
class PlateauScheduler {
 public:
  explicit PlateauScheduler(double factor = 0.5, std::size_t patience = 3, double threshold = 1e-4);

  // Records one epoch's validation MAE; true when the rates must be reduced now.
  bool observe(double val_mae);

  double best() const { return best_; }
  std::size_t bad_epochs() const { return bad_; }
  double factor() const { return factor_; }

 private:
  double factor_;
  std::size_t patience_;
  double threshold_;
  double best_;
  std::size_t bad_ = 0;
  bool started_ = false;
};

// Learning-rate multiplier in effect during each epoch of a validation trace
// (epoch 1 runs at 1.0).
std::vector<double> plateau_schedule(const std::vector<double>& val_trace, double factor = 0.5,
                                     std::size_t patience = 3, double threshold = 1e-4);

}  // namespace thermo
