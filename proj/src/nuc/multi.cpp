#include "thermo/nuc/multi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "thermo/core/error.hpp"
#include "thermo/nn/normalize.hpp"

namespace thermo {
namespace {

const std::string kPrefix = "nuc.multi.";
const std::string kConfigName = kPrefix + "cfg";
constexpr std::size_t kConfigSize = 8;

std::string block_name(std::size_t i) { return kPrefix + "block" + std::to_string(i); }
std::size_t input_channels(const MultiNucConfig& cfg) { return cfg.frames + 3; }
std::size_t head_channels(const MultiNucConfig& cfg) { return cfg.taps() + 2; }

double softplus_inverse(double y) { return y + std::log(-std::expm1(-y)); }

}  // namespace

void MultiNucConfig::validate() const {
  if (frames < 1 || depth < 1 || width < 1) throw ParameterError("multi nuc: frames, depth and width must be positive");
  if (kernel % 2 == 0) throw ParameterError("multi nuc: kernel size must be odd");
  if (!(slope >= 0.0F && slope < 1.0F)) throw ParameterError("multi nuc: slope must be in [0, 1)");
  if (!(gain_nominal > 0.0) || !std::isfinite(offset_nominal) || !(delta_scale > 0.0))
    throw ParameterError("multi nuc: nominal gain and delta scale must be positive");
}

MeanFeatures mean_features(double mean_gray, double t_amb, const MultiNucConfig& cfg) {
  const double m = (mean_gray - cfg.offset_nominal) / cfg.gain_nominal;
  const double v = ambient_unit(t_amb) - 0.5;
  return {m, m * v, v, v * v, m * v * v};
}

PreparedBurst prepare_burst(const Burst& burst, double t_amb, const MultiNucConfig& cfg,
                            const MultiNucOptions& options) {
  burst.validate();
  const std::size_t n = burst.size();
  PreparedBurst out;
  out.height = burst.height();
  out.width = burst.width();
  out.t_amb = t_amb;
  if (options.register_frames && n >= 2) {
    out.registration = register_burst(burst, options.search_radius);
  } else {
    out.registration.shifts.assign(n, Shift{});
    out.registration.frame_confidence.assign(n, 1.0);
    out.registration.confidence = 1.0;
  }
  std::vector<Grid2D> aligned;
  aligned.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    require(burst.frames[k].levels.all_finite(), "nuc_multi: frame has non-finite values");
    aligned.push_back(align_to_reference(burst.frames[k].levels, out.registration.shifts[k]));
  }

  out.order.resize(n);
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  const auto& shifts = out.registration.shifts;
  std::stable_sort(out.order.begin() + 1, out.order.end(), [&](std::size_t a, std::size_t b) {
    if (shifts[a].dy != shifts[b].dy) return shifts[a].dy < shifts[b].dy;
    if (shifts[a].dx != shifts[b].dx) return shifts[a].dx < shifts[b].dx;
    const auto va = aligned[a].values();
    const auto vb = aligned[b].values();
    return std::lexicographical_compare(va.begin(), va.end(), vb.begin(), vb.end());
  });

  double total = 0.0;
  for (const auto& f : burst.frames)
    for (float v : f.levels.values()) total += v;
  out.mean_gray = total / static_cast<double>(n * out.height * out.width);
  out.features = mean_features(out.mean_gray, t_amb, cfg);

  const std::size_t plane = out.height * out.width;
  out.centered = Tensor<double>::chw(n, out.height, out.width);
  for (std::size_t c = 0; c < n; ++c) {
    const auto src = aligned[out.order[c]].values();
    for (std::size_t i = 0; i < plane; ++i) out.centered[c * plane + i] = (src[i] - out.mean_gray) / cfg.gain_nominal;
  }
  return out;
}

WeightStore init_multi_nuc(const MultiNucConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  WeightStore store;
  Rng rng(hash_key(seed, 0x4d554c54ULL));
  for (std::size_t i = 0; i < cfg.depth; ++i)
    init_conv(store, block_name(i), cfg.width, i == 0 ? input_channels(cfg) : cfg.width, 3, cfg.slope, rng);
  const std::size_t head = head_channels(cfg);
  store.set(kPrefix + "head.w", Tensor<float>({head, cfg.width, 3, 3}));
  Tensor<float> bias({head});
  const std::size_t kk = cfg.kernel * cfg.kernel;
  for (std::size_t f = 0; f < cfg.frames; ++f) bias[f * kk + kk / 2] = kCenterLogit;
  bias[cfg.taps()] = static_cast<float>(softplus_inverse(1.0 - kGainEpsilonMulti));
  store.set(kPrefix + "head.b", std::move(bias));

  Tensor<float> mw({1, kMeanFeatures, 1, 1});
  mw[0] = 1.0F;
  store.set(kPrefix + "mean.w", std::move(mw));
  store.set(kPrefix + "mean.b", Tensor<float>({1}));
  store.set(kConfigName,
            Tensor<float>({kConfigSize},
                          std::vector<float>{static_cast<float>(cfg.frames), static_cast<float>(cfg.depth),
                                             static_cast<float>(cfg.width), static_cast<float>(cfg.kernel), cfg.slope,
                                             static_cast<float>(cfg.gain_nominal),
                                             static_cast<float>(cfg.offset_nominal),
                                             static_cast<float>(cfg.delta_scale)}));
  return store;
}

MultiNucConfig multi_nuc_config(const WeightStore& weights) {
  const auto v = read_config(weights, kConfigName, kConfigSize);
  MultiNucConfig cfg;
  cfg.frames = static_cast<std::size_t>(v[0]);
  cfg.depth = static_cast<std::size_t>(v[1]);
  cfg.width = static_cast<std::size_t>(v[2]);
  cfg.kernel = static_cast<std::size_t>(v[3]);
  cfg.slope = static_cast<float>(v[4]);
  cfg.gain_nominal = v[5];
  cfg.offset_nominal = v[6];
  cfg.delta_scale = v[7];
  try {
    cfg.validate();
  } catch (const ParameterError& e) {
    throw LoadError(std::string("weights: bad multi nuc config: ") + e.what());
  }
  for (std::size_t i = 0; i < cfg.depth; ++i)
    expect_conv(weights, block_name(i), cfg.width, i == 0 ? input_channels(cfg) : cfg.width, 3);
  expect_conv(weights, kPrefix + "head", head_channels(cfg), cfg.width, 3);
  expect_conv(weights, kPrefix + "mean", 1, kMeanFeatures, 1);
  return cfg;
}

template <typename T>
typename Graph<T>::Var mean_temp_graph(Binder<T>& p, const MeanFeatures& features) {
  Graph<T>& g = p.graph();
  Tensor<T> f = Tensor<T>::chw(kMeanFeatures, 1, 1);
  for (std::size_t i = 0; i < kMeanFeatures; ++i) f[i] = static_cast<T>(features[i]);
  return g.conv2d(g.constant(std::move(f)), p(kPrefix + "mean.w"), p(kPrefix + "mean.b"), 0);
}

template <typename T>
MultiNucVars<T> multi_nuc_graph(Binder<T>& p, const MultiNucConfig& cfg, const PreparedBurst& burst) {
  Graph<T>& g = p.graph();
  const std::size_t n = burst.centered.channels();
  if (n != cfg.frames) {
    throw LoadError("nuc_multi: weights expect " + std::to_string(cfg.frames) + " frames, burst has " +
                    std::to_string(n));
  }
  const std::size_t h = burst.height;
  const std::size_t w = burst.width;
  const std::size_t plane = h * w;
  const double span = kNetTempMax - kNetTempMin;

  auto t_mean = mean_temp_graph(p, burst.features);
  auto mean_map = g.broadcast(t_mean, h, w);
  auto mean_norm = g.affine(mean_map, static_cast<T>(1.0 / span), static_cast<T>(-kNetTempMin / span));

  Tensor<T> fixed = Tensor<T>::chw(n + 2, h, w);
  for (std::size_t i = 0; i < n * plane; ++i) fixed[i] = static_cast<T>(burst.centered[i] / span);
  const Tensor<T> radius = radius_channel<T>(h, w);
  const T amb = static_cast<T>(ambient_unit(burst.t_amb));
  for (std::size_t i = 0; i < plane; ++i) {
    fixed[n * plane + i] = amb;
    fixed[(n + 1) * plane + i] = radius[i];
  }
  auto x = g.concat(g.constant(std::move(fixed)), mean_norm);
  const T slope = static_cast<T>(cfg.slope);
  for (std::size_t i = 0; i < cfg.depth; ++i) x = conv_block(p, block_name(i), x, true, slope);
  auto head = conv_block(p, kPrefix + "head", x, false, slope);

  auto kernels = g.softmax_channels(g.slice(head, 0, cfg.taps()));
  auto fused = g.kernel_fuse(kernels, burst.centered.template cast<T>(), cfg.kernel);
  auto gain = g.affine(g.softplus(g.slice(head, cfg.taps(), 1)), T{1}, static_cast<T>(kGainEpsilonMulti));
  auto delta = g.affine(g.slice(head, cfg.taps() + 1, 1), static_cast<T>(cfg.delta_scale), T{0});
  auto temp = g.add(g.add(mean_map, delta), g.mul(gain, fused));
  return {temp, t_mean, kernels, fused};
}

template Graph<float>::Var mean_temp_graph(Binder<float>&, const MeanFeatures&);
template Graph<double>::Var mean_temp_graph(Binder<double>&, const MeanFeatures&);
template MultiNucVars<float> multi_nuc_graph(Binder<float>&, const MultiNucConfig&, const PreparedBurst&);
template MultiNucVars<double> multi_nuc_graph(Binder<double>&, const MultiNucConfig&, const PreparedBurst&);

double estimate_mean_temp(const Burst& burst, double t_amb, const WeightStore& weights) {
  const MultiNucConfig cfg = multi_nuc_config(weights);
  burst.validate();
  double total = 0.0;
  for (const auto& f : burst.frames)
    for (float v : f.levels.values()) total += v;
  const double mean_gray = total / static_cast<double>(burst.size() * burst.height() * burst.width());
  Graph<double> g(false);
  const TensorMap<double> params = cast_map<double>(weights.with_prefix(kPrefix + "mean.").tensors());
  Binder<double> p(g, params);
  return g.value(mean_temp_graph(p, mean_features(mean_gray, t_amb, cfg)))[0];
}

MultiNucOutput nuc_multi_detail(const Burst& burst, double t_amb, const WeightStore& weights,
                                const MultiNucOptions& options) {
  const MultiNucConfig cfg = multi_nuc_config(weights);
  MultiNucOutput out;
  out.prepared = prepare_burst(burst, t_amb, cfg, options);
  Graph<float> g(false);
  Binder<float> p(g, weights.tensors());
  const auto vars = multi_nuc_graph(p, cfg, out.prepared);
  out.temperature = grid_from_tensor(g.value(vars.temperature), Unit::celsius);
  out.fused = grid_from_tensor(g.value(vars.fused), Unit::celsius);
  out.kernels = g.value(vars.kernels);
  out.mean_temp = g.value(vars.mean)[0];
  return out;
}

Grid2D nuc_multi(const Burst& burst, double t_amb, const WeightStore& weights, const MultiNucOptions& options) {
  return nuc_multi_detail(burst, t_amb, weights, options).temperature;
}

}  // namespace thermo
