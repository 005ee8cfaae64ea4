#include "thermo/nuc/single.hpp"

#include <cmath>
#include <string>

#include "thermo/core/error.hpp"

namespace thermo {
namespace {

const std::string kPrefix = "nuc.single.";
const std::string kConfigName = kPrefix + "cfg";
constexpr std::size_t kConfigSize = 6;

std::string block_name(std::size_t i) { return kPrefix + "block" + std::to_string(i); }

double softplus_inverse(double y) { return y + std::log(-std::expm1(-y)); }

}  // namespace

void SingleNucConfig::validate() const {
  if (depth < 1 || width < 1) throw ParameterError("single nuc: depth and width must be positive");
  if (!(slope >= 0.0F && slope < 1.0F)) throw ParameterError("single nuc: slope must be in [0, 1)");
  if (!(gain_nominal > 0.0) || !std::isfinite(offset_nominal) || !(offset_scale > 0.0))
    throw ParameterError("single nuc: nominal gain and offset scale must be positive");
}

WeightStore init_single_nuc(const SingleNucConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  WeightStore store;
  Rng rng(hash_key(seed, 0x5149ULL));
  for (std::size_t i = 0; i < cfg.depth; ++i)
    init_conv(store, block_name(i), cfg.width, i == 0 ? kSingleNucInputs : cfg.width, 3, cfg.slope, rng);
  init_conv(store, kPrefix + "gain", 1, cfg.width, 3, cfg.slope, rng);
  init_conv(store, kPrefix + "offset", 1, cfg.width, 3, cfg.slope, rng);
  store.set(kPrefix + "gain.w", Tensor<float>({1, cfg.width, 3, 3}));
  store.set(kPrefix + "offset.w", Tensor<float>({1, cfg.width, 3, 3}));
  store.set(kPrefix + "gain.b", Tensor<float>({1}, static_cast<float>(softplus_inverse(1.0 - kGainEpsilon))));
  store.set(kConfigName,
            Tensor<float>({kConfigSize}, std::vector<float>{static_cast<float>(cfg.depth), static_cast<float>(cfg.width),
                                                            cfg.slope, static_cast<float>(cfg.gain_nominal),
                                                            static_cast<float>(cfg.offset_nominal),
                                                            static_cast<float>(cfg.offset_scale)}));
  return store;
}

SingleNucConfig single_nuc_config(const WeightStore& weights) {
  const auto v = read_config(weights, kConfigName, kConfigSize);
  SingleNucConfig cfg;
  cfg.depth = static_cast<std::size_t>(v[0]);
  cfg.width = static_cast<std::size_t>(v[1]);
  cfg.slope = static_cast<float>(v[2]);
  cfg.gain_nominal = v[3];
  cfg.offset_nominal = v[4];
  cfg.offset_scale = v[5];
  try {
    cfg.validate();
  } catch (const ParameterError& e) {
    throw LoadError(std::string("weights: bad single nuc config: ") + e.what());
  }
  for (std::size_t i = 0; i < cfg.depth; ++i)
    expect_conv(weights, block_name(i), cfg.width, i == 0 ? kSingleNucInputs : cfg.width, 3);
  expect_conv(weights, kPrefix + "gain", 1, cfg.width, 3);
  expect_conv(weights, kPrefix + "offset", 1, cfg.width, 3);
  return cfg;
}

template <typename T>
SingleNucVars<T> single_nuc_graph(Binder<T>& p, const SingleNucConfig& cfg, const Grid2D& levels, double t_amb) {
  Graph<T>& g = p.graph();
  const std::size_t h = levels.height();
  const std::size_t w = levels.width();
  const double span = kNetTempMax - kNetTempMin;

  Tensor<T> input = Tensor<T>::chw(kSingleNucInputs, h, w);
  const Tensor<T> radius = radius_channel<T>(h, w);
  const T amb = static_cast<T>(ambient_unit(t_amb));
  for (std::size_t i = 0; i < h * w; ++i) {
    const double t_nom = (levels.data()[i] - cfg.offset_nominal) / cfg.gain_nominal;
    input[i] = static_cast<T>((t_nom - kNetTempMin) / span);
    input[h * w + i] = amb;
    input[2 * h * w + i] = radius[i];
  }
  auto x = g.constant(std::move(input));
  const T slope = static_cast<T>(cfg.slope);
  for (std::size_t i = 0; i < cfg.depth; ++i) x = conv_block(p, block_name(i), x, true, slope);

  auto raw_g = conv_block(p, kPrefix + "gain", x, false, slope);
  auto raw_d = conv_block(p, kPrefix + "offset", x, false, slope);
  auto gain = g.affine(g.softplus(raw_g), static_cast<T>(cfg.gain_nominal),
                       static_cast<T>(cfg.gain_nominal * kGainEpsilon));
  auto offset = g.affine(raw_d, static_cast<T>(cfg.offset_scale), static_cast<T>(cfg.offset_nominal));
  auto l = g.constant(tensor_from_grid<T>(levels));
  auto temp = g.div(g.sub(l, offset), gain);
  return {temp, gain, offset};
}

template SingleNucVars<float> single_nuc_graph(Binder<float>&, const SingleNucConfig&, const Grid2D&, double);
template SingleNucVars<double> single_nuc_graph(Binder<double>&, const SingleNucConfig&, const Grid2D&, double);

SingleNucOutput nuc_single_maps(const GrayFrame& frame, double t_amb, const WeightStore& weights) {
  require(frame.levels.all_finite(), "nuc_single: frame has non-finite values");
  const SingleNucConfig cfg = single_nuc_config(weights);
  Graph<float> g(false);
  Binder<float> p(g, weights.tensors());
  const auto out = single_nuc_graph(p, cfg, frame.levels, t_amb);
  return {grid_from_tensor(g.value(out.temperature), Unit::celsius), grid_from_tensor(g.value(out.gain), Unit::dimensionless),
          grid_from_tensor(g.value(out.offset), Unit::graylevel)};
}

Grid2D nuc_single(const GrayFrame& frame, double t_amb, const WeightStore& weights) {
  return nuc_single_maps(frame, t_amb, weights).temperature;
}

}  // namespace thermo
