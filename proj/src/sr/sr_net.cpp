#include "thermo/sr/sr_net.hpp"

#include <string>

#include "thermo/core/error.hpp"
#include "thermo/nn/normalize.hpp"

namespace thermo {
namespace {

const std::string kPrefix = "sr.";
const std::string kConfigName = kPrefix + "cfg";
constexpr std::size_t kConfigSize = 4;

std::string block_name(std::size_t i) { return kPrefix + "res" + std::to_string(i); }

}  // namespace

void SrConfig::validate() const {
  if (scale != 2 && scale != 4) throw ParameterError("sr: scale must be 2 or 4");
  if (channels == 0 || channels % (scale * scale) != 0)
    throw ParameterError("sr: channel count must be a positive multiple of scale^2");
  if (!(slope >= 0.0F && slope < 1.0F)) throw ParameterError("sr: slope must be in [0, 1)");
}

WeightStore init_sr(const SrConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  WeightStore store;
  Rng rng(hash_key(seed, 0x5352ULL));
  init_conv(store, kPrefix + "feat", cfg.channels, 1, 3, cfg.slope, rng);
  for (std::size_t i = 0; i < cfg.blocks; ++i) {
    init_conv(store, block_name(i) + ".a", cfg.channels, cfg.channels, 3, cfg.slope, rng);
    init_conv(store, block_name(i) + ".b", cfg.channels, cfg.channels, 3, cfg.slope, rng);
  }
  store.set(kPrefix + "fuse.w", Tensor<float>({1, 2 * cfg.lane_channels(), 3, 3}));
  store.set(kPrefix + "fuse.b", Tensor<float>({1}));
  store.set(kConfigName, Tensor<float>({kConfigSize}, std::vector<float>{static_cast<float>(cfg.scale),
                                                                         static_cast<float>(cfg.channels),
                                                                         static_cast<float>(cfg.blocks), cfg.slope}));
  return store;
}

SrConfig sr_config(const WeightStore& weights) {
  const auto v = read_config(weights, kConfigName, kConfigSize);
  SrConfig cfg;
  cfg.scale = static_cast<std::size_t>(v[0]);
  cfg.channels = static_cast<std::size_t>(v[1]);
  cfg.blocks = static_cast<std::size_t>(v[2]);
  cfg.slope = static_cast<float>(v[3]);
  try {
    cfg.validate();
  } catch (const ParameterError& e) {
    throw LoadError(std::string("weights: bad sr config: ") + e.what());
  }
  expect_conv(weights, kPrefix + "feat", cfg.channels, 1, 3);
  for (std::size_t i = 0; i < cfg.blocks; ++i) {
    expect_conv(weights, block_name(i) + ".a", cfg.channels, cfg.channels, 3);
    expect_conv(weights, block_name(i) + ".b", cfg.channels, cfg.channels, 3);
  }
  expect_conv(weights, kPrefix + "fuse", 1, 2 * cfg.lane_channels(), 3);
  return cfg;
}

template <typename T>
SrVars<T> sr_graph(Binder<T>& p, const SrConfig& cfg, typename Graph<T>::Var t_map) {
  Graph<T>& g = p.graph();
  const double span = kNetTempMax - kNetTempMin;
  const T slope = static_cast<T>(cfg.slope);
  auto x = g.affine(t_map, static_cast<T>(1.0 / span), static_cast<T>(-kNetTempMin / span));
  auto feat = conv_block(p, kPrefix + "feat", x, true, slope);
  auto lr = feat;
  for (std::size_t i = 0; i < cfg.blocks; ++i) lr = residual_block(p, block_name(i), lr, slope);
  auto lanes = g.concat(g.pixel_shuffle(lr, cfg.scale), g.pixel_shuffle(feat, cfg.scale));
  auto branch = g.affine(conv_block(p, kPrefix + "fuse", lanes, false, slope), static_cast<T>(span), T{0});
  auto skip = g.bicubic(t_map, Ratio::up(cfg.scale));
  return {g.add(branch, skip), branch};
}

template SrVars<float> sr_graph(Binder<float>&, const SrConfig&, Graph<float>::Var);
template SrVars<double> sr_graph(Binder<double>&, const SrConfig&, Graph<double>::Var);

namespace {

SrVars<float> run(Graph<float>& g, const Grid2D& t_map, const WeightStore& weights, std::size_t s) {
  const SrConfig cfg = sr_config(weights);
  if (cfg.scale != s) {
    throw LoadError("sr: weights are for scale " + std::to_string(cfg.scale) + ", requested " + std::to_string(s));
  }
  require(t_map.all_finite(), "sr_forward: input has non-finite values");
  Binder<float> p(g, weights.tensors());
  return sr_graph(p, cfg, g.constant(tensor_from_grid<float>(t_map)));
}

}  // namespace

Grid2D sr_forward(const Grid2D& t_map, const WeightStore& weights, std::size_t s) {
  Graph<float> g(false);
  return grid_from_tensor(g.value(run(g, t_map, weights, s).output), Unit::celsius);
}

Grid2D sr_branch(const Grid2D& t_map, const WeightStore& weights, std::size_t s) {
  Graph<float> g(false);
  return grid_from_tensor(g.value(run(g, t_map, weights, s).branch), Unit::celsius);
}

}  // namespace thermo
