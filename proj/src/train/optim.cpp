#include "thermo/train/optim.hpp"

#include <cmath>
#include <limits>

#include "thermo/core/error.hpp"

namespace thermo {

AdamW::AdamW(double lr, double weight_decay, double beta1, double beta2, double eps)
    : lr_(lr), weight_decay_(weight_decay), beta1_(beta1), beta2_(beta2), eps_(eps) {
  if (!(lr > 0.0)) throw ParameterError("adamw: learning rate must be positive");
  if (!(weight_decay >= 0.0)) throw ParameterError("adamw: weight decay must be non-negative");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) throw ParameterError("adamw: betas in [0, 1)");
}

void AdamW::set_lr(double lr) {
  if (!(lr > 0.0)) throw ParameterError("adamw: learning rate must be positive");
  lr_ = lr;
}

void AdamW::step(TensorMap<float>& params, const std::map<std::string, std::vector<double>>& grads) {
  ++state_.step;
  const double t = static_cast<double>(state_.step);
  const double c1 = 1.0 - std::pow(beta1_, t);
  const double c2 = 1.0 - std::pow(beta2_, t);
  for (const auto& [name, g] : grads) {
    auto it = params.find(name);
    require(it != params.end(), "adamw: gradient for unknown parameter '" + name + "'");
    Tensor<float>& p = it->second;
    require(g.size() == p.size(), "adamw: gradient size mismatch for '" + name + "'");
    auto& m = state_.m[name];
    auto& v = state_.v[name];
    if (m.empty()) {
      m.assign(p.size(), 0.0);
      v.assign(p.size(), 0.0);
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
      const double update = (m[i] / c1) / (std::sqrt(v[i] / c2) + eps_);
      const double w = p[i];
      p[i] = static_cast<float>(w - lr_ * weight_decay_ * w - lr_ * update);
    }
  }
}

PlateauScheduler::PlateauScheduler(double factor, std::size_t patience, double threshold)
    : factor_(factor), patience_(patience), threshold_(threshold), best_(std::numeric_limits<double>::infinity()) {
  if (!(factor > 0.0 && factor < 1.0)) throw ParameterError("plateau scheduler: factor must be in (0, 1)");
  if (patience < 1) throw ParameterError("plateau scheduler: patience must be positive");
  if (!(threshold >= 0.0)) throw ParameterError("plateau scheduler: threshold must be non-negative");
}

bool PlateauScheduler::observe(double val_mae) {
  if (!started_ || val_mae < best_ - threshold_) {
    started_ = true;
    best_ = val_mae;
    bad_ = 0;
    return false;
  }
  if (++bad_ >= patience_) {
    bad_ = 0;
    return true;
  }
  return false;
}

std::vector<double> plateau_schedule(const std::vector<double>& val_trace, double factor, std::size_t patience,
                                     double threshold) {
  PlateauScheduler sched(factor, patience, threshold);
  std::vector<double> out;
  double scale = 1.0;
  for (double v : val_trace) {
    out.push_back(scale);
    if (sched.observe(v)) scale *= factor;
  }
  return out;
}

}  // namespace thermo
