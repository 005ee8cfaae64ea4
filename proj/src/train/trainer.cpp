#include "thermo/train/trainer.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "thermo/core/error.hpp"
#include "thermo/core/resample.hpp"
#include "thermo/io/atomic_write.hpp"
#include "thermo/metrics/metrics.hpp"
#include "thermo/nuc/nuc_net.hpp"
#include "thermo/sim/random.hpp"
#include "thermo/sr/sr_net.hpp"
#include "thermo/train/loss.hpp"
#include "thermo/train/optim.hpp"

namespace thermo {

std::string TrainLog::csv() const {
  std::ostringstream out;
  out << "epoch,train_loss,val_mae,lr_sr,lr_nuc\n";
  out << std::setprecision(9);
  for (const auto& r : rows)
    out << r.epoch << ',' << r.train_loss << ',' << r.val_mae << ',' << r.lr_sr << ',' << r.lr_nuc << '\n';
  return out.str();
}

void TrainLog::save(const std::filesystem::path& path) const { write_file_atomic(path, csv()); }

bool operator==(const TrainLog& a, const TrainLog& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& x = a.rows[i];
    const auto& y = b.rows[i];
    if (x.epoch != y.epoch || x.train_loss != y.train_loss || x.val_mae != y.val_mae || x.lr_sr != y.lr_sr ||
        x.lr_nuc != y.lr_nuc)
      return false;
  }
  return true;
}

void TrainConfig::validate() const {
  if (scale != 2 && scale != 4) throw ParameterError("train: scale must be 2 or 4");
  if (!(lr_sr > 0.0 && lr_nuc > 0.0 && pretrain_lr > 0.0)) throw ParameterError("train: learning rates must be > 0");
  if (!(plateau_factor > 0.0 && plateau_factor < 1.0)) throw ParameterError("train: plateau factor must be in (0, 1)");
  if (plateau_patience < 1 || batch_size < 1 || epochs < 1)
    throw ParameterError("train: patience, batch size and epochs must be positive");
  if (!(weight_decay >= 0.0)) throw ParameterError("train: weight decay must be non-negative");
}

TrainingAborted::TrainingAborted(std::size_t epoch, std::size_t batch, const std::string& what)
    : std::runtime_error("training aborted at epoch " + std::to_string(epoch) + ", batch " + std::to_string(batch) +
                         ": " + what),
      epoch_(epoch),
      batch_(batch) {}

WeightStore default_pipeline_weights(const TrainConfig& config) {
  WeightStore w;
  if (config.mode.multi()) {
    MultiNucConfig mc;
    mc.frames = config.mode.frames;
    w = init_multi_nuc(mc, config.seed);
  } else {
    w = init_single_nuc(SingleNucConfig{}, config.seed);
  }
  SrConfig sc;
  sc.scale = config.scale;
  w.merge(init_sr(sc, config.seed));
  return w;
}

MeanEstimatorFit fit_mean_estimator(const std::vector<MeanFeatures>& features, const std::vector<double>& targets) {
  require(!features.empty() && features.size() == targets.size(), "fit_mean_estimator: need matched samples");
  constexpr int k = static_cast<int>(kMeanFeatures) + 1;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(features.size()), k);
  Eigen::VectorXd y(static_cast<Eigen::Index>(features.size()));
  for (std::size_t i = 0; i < features.size(); ++i) {
    for (std::size_t j = 0; j < kMeanFeatures; ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = features[i][j];
    a(static_cast<Eigen::Index>(i), k - 1) = 1.0;
    y(static_cast<Eigen::Index>(i)) = targets[i];
  }
  // Column scaling plus a light ridge keeps rank-deficient sets (e.g. a single t_amb) well posed.
  Eigen::VectorXd scale = a.colwise().norm().transpose().cwiseMax(1e-12);
  Eigen::MatrixXd as = a * scale.cwiseInverse().asDiagonal();
  Eigen::MatrixXd normal = as.transpose() * as + 1e-9 * Eigen::MatrixXd::Identity(k, k);
  Eigen::VectorXd sol = normal.ldlt().solve(as.transpose() * y).cwiseQuotient(scale);
  MeanEstimatorFit fit;
  for (std::size_t j = 0; j < kMeanFeatures; ++j) fit.weights[j] = sol(static_cast<Eigen::Index>(j));
  fit.bias = sol(k - 1);
  return fit;
}

void pretrain_mean_estimator(WeightStore& nuc, const std::vector<TrainingPair>& pairs, const MultiNucOptions& options) {
  const MultiNucConfig cfg = multi_nuc_config(nuc);
  std::vector<MeanFeatures> feats;
  std::vector<double> targets;
  for (const auto& p : pairs) {
    require(p.burst.has_value(), "pretrain_mean_estimator: pairs must hold bursts");
    MultiNucOptions no_reg = options;
    no_reg.register_frames = false;
    feats.push_back(prepare_burst(*p.burst, p.t_amb, cfg, no_reg).features);
    targets.push_back(mean(p.lr_target));
  }
  const MeanEstimatorFit fit = fit_mean_estimator(feats, targets);
  Tensor<float> w({1, kMeanFeatures, 1, 1});
  for (std::size_t j = 0; j < kMeanFeatures; ++j) w[j] = static_cast<float>(fit.weights[j]);
  nuc.set("nuc.multi.mean.w", std::move(w));
  nuc.set("nuc.multi.mean.b", Tensor<float>({1}, static_cast<float>(fit.bias)));
}

namespace {

enum class Stage { end_to_end, nuc_only, sr_only };

using GradMap = std::map<std::string, std::vector<double>>;

/// Everything needed to run the networks on the pairs of one dataset.
class Runner {
 public:
  Runner(Stage stage, const TrainConfig& config, const WeightStore& weights) : stage_(stage), config_(config) {
    if (stage != Stage::sr_only) {
      nuc_ = NucNet::from_weights(weights);
      if (nuc_.mode != config.mode) {
        throw LoadError("train: NUC weights are " + to_string(nuc_.mode) + ", configuration asks for " +
                        to_string(config.mode));
      }
    }
    if (stage != Stage::nuc_only) {
      sr_ = sr_config(weights);
      if (sr_.scale != config.scale) throw LoadError("train: SR weights do not match the configured scale");
    }
  }

  void prepare(const std::vector<TrainingPair>& pairs) {
    for (const auto& p : pairs) {
      if (stage_ == Stage::sr_only) continue;
      if (nuc_.mode.multi()) {
        require(p.burst.has_value(), "train: multi-frame NUC needs burst pairs");
        if (!prepared_.count(&p)) prepared_.emplace(&p, prepare_burst(*p.burst, p.t_amb, nuc_.multi, config_.multi_options));
      } else {
        require(p.frame.has_value(), "train: single-frame NUC needs frame pairs");
      }
    }
  }

  // Loss (or MAE when !record) of one pair; fills grads when recording.
  double run(const TensorMap<float>& params, const TrainingPair& pair, bool record, GradMap* grads) const {
    Graph<float> g(record);
    Binder<float> p(g, params);
    typename Graph<float>::Var out;
    Tensor<float> target;
    if (stage_ == Stage::sr_only) {
      out = sr_graph(p, sr_, g.constant(tensor_from_grid<float>(pair.lr_target))).output;
      target = tensor_from_grid<float>(pair.target);
    } else {
      typename Graph<float>::Var t;
      if (nuc_.mode.multi()) {
        t = multi_nuc_graph(p, nuc_.multi, prepared_.at(&pair)).temperature;
      } else {
        t = single_nuc_graph(p, nuc_.single, pair.frame->levels, pair.t_amb).temperature;
      }
      if (stage_ == Stage::nuc_only) {
        out = t;
        target = tensor_from_grid<float>(pair.lr_target);
      } else {
        out = sr_graph(p, sr_, t).output;
        target = tensor_from_grid<float>(pair.target);
      }
    }
    if (!record) return mae_of(g.value(out), target);
    auto loss = stage_ == Stage::nuc_only ? g.mae(out, target) : loss_graph(g, out, target);
    const double value = g.value(loss)[0];
    if (!std::isfinite(value)) return value;
    g.backward(loss);
    for (const auto& [name, var] : p.bound()) {
      if (!g.has_grad(var)) continue;
      const Tensor<float>& gr = g.grad(var);
      auto& acc = (*grads)[name];
      if (acc.empty()) acc.assign(gr.size(), 0.0);
      for (std::size_t i = 0; i < gr.size(); ++i) acc[i] += gr[i];
    }
    return value;
  }

 private:
  static double mae_of(const Tensor<float>& a, const Tensor<float>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(static_cast<double>(a[i]) - b[i]);
    return s / static_cast<double>(a.size());
  }

  Stage stage_;
  const TrainConfig& config_;
  NucNet nuc_;
  SrConfig sr_;
  std::map<const TrainingPair*, PreparedBurst> prepared_;
};

GradMap subset(const GradMap& grads, const std::string& prefix) {
  GradMap out;
  for (const auto& [k, v] : grads)
    if (k.rfind(prefix, 0) == 0) out.emplace(k, v);
  return out;
}

TrainResult run_training(Stage stage, const TrainConfig& config, const Dataset& dataset, WeightStore weights) {
  config.validate();
  require(!dataset.train.empty(), "train: dataset has no training pairs");
  Runner runner(stage, config, weights);
  runner.prepare(dataset.train);
  // Without a held-out split the training pairs double as validation.
  const std::vector<TrainingPair>& val = dataset.val.empty() ? dataset.train : dataset.val;
  runner.prepare(val);

  const double lr_nuc0 = stage == Stage::end_to_end ? config.lr_nuc : config.pretrain_lr;
  const double lr_sr0 = stage == Stage::end_to_end ? config.lr_sr : config.pretrain_lr;
  AdamW opt_nuc(lr_nuc0, config.weight_decay);
  AdamW opt_sr(lr_sr0, config.weight_decay);
  PlateauScheduler sched(config.plateau_factor, config.plateau_patience, config.plateau_threshold);

  TrainResult result;
  result.best_val_mae = std::numeric_limits<double>::infinity();
  TensorMap<float>& params = weights.tensors();
  const std::size_t n = dataset.train.size();
  const std::size_t batches = (n + config.batch_size - 1) / config.batch_size;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(hash_key(config.seed, 0x45504f43ULL, epoch));
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[static_cast<std::size_t>(rng.integer(0, static_cast<long>(i - 1)))]);

    TrainLogRow row;
    row.epoch = epoch;
    row.lr_nuc = stage == Stage::sr_only ? 0.0 : opt_nuc.lr();
    row.lr_sr = stage == Stage::nuc_only ? 0.0 : opt_sr.lr();
    double loss_sum = 0.0;
    for (std::size_t b = 0; b < batches; ++b) {
      const std::size_t lo = b * config.batch_size;
      const std::size_t hi = std::min(n, lo + config.batch_size);
      GradMap grads;
      for (std::size_t i = lo; i < hi; ++i) {
        const double l = runner.run(params, dataset.train[order[i]], true, &grads);
        if (!std::isfinite(l)) throw TrainingAborted(epoch, b + 1, "non-finite loss on pair '" + dataset.train[order[i]].id + "'");
        loss_sum += l;
      }
      const double inv = 1.0 / static_cast<double>(hi - lo);
      for (auto& [k, v] : grads)
        for (double& x : v) x *= inv;
      if (stage != Stage::sr_only) opt_nuc.step(params, subset(grads, "nuc."));
      if (stage != Stage::nuc_only) opt_sr.step(params, subset(grads, "sr."));
    }
    row.train_loss = loss_sum / static_cast<double>(n);

    double val_sum = 0.0;
    for (const auto& p : val) val_sum += runner.run(params, p, false, nullptr);
    row.val_mae = val_sum / static_cast<double>(val.size());
    if (!std::isfinite(row.val_mae)) throw TrainingAborted(epoch, batches, "non-finite validation MAE");

    if (row.val_mae < result.best_val_mae) {
      result.best_val_mae = row.val_mae;
      result.best_epoch = epoch;
      result.best_weights = weights;
    }
    if (sched.observe(row.val_mae)) {
      opt_nuc.set_lr(opt_nuc.lr() * config.plateau_factor);
      opt_sr.set_lr(opt_sr.lr() * config.plateau_factor);
    }
    result.log.rows.push_back(row);
    if (config.on_epoch) config.on_epoch(row);
  }
  result.weights = std::move(weights);
  return result;
}

}  // namespace

TrainResult train_end_to_end(const TrainConfig& config, const Dataset& dataset,
                             const std::optional<WeightStore>& pretrained) {
  WeightStore weights = pretrained ? *pretrained : default_pipeline_weights(config);
  return run_training(Stage::end_to_end, config, dataset, std::move(weights));
}

TrainResult pretrain_module(Module which, const TrainConfig& config, const Dataset& dataset, const WeightStore& init) {
  if (which == Module::sr) return run_training(Stage::sr_only, config, dataset, init.with_prefix("sr."));
  WeightStore nuc = init.with_prefix("nuc.");
  if (NucNet::from_weights(nuc).mode.multi()) pretrain_mean_estimator(nuc, dataset.train, config.multi_options);
  return run_training(Stage::nuc_only, config, dataset, std::move(nuc));
}

}  // namespace thermo
