#include "thermo/nn/layers.hpp"

#include <cmath>

#include "thermo/core/ops.hpp"

namespace thermo {

Tensor3 residual_block(const Tensor3& input, const ConvKernel<float>& first, const ConvKernel<float>& second,
                       float slope) {
  require(first.in_channels() == input.channels() && second.out_channels() == input.channels(),
          "residual_block: channel mismatch");
  Tensor3 h = leaky_relu(conv2d(input, first), slope);
  h = conv2d(h, second);
  require(h.shape() == input.shape(), "residual_block: branch changes the shape");
  for (std::size_t i = 0; i < h.size(); ++i) h[i] += input[i];
  return h;
}

void init_conv(WeightStore& store, const std::string& name, std::size_t out_c, std::size_t in_c, std::size_t k,
               float slope, Rng& rng, double gain_scale) {
  const double fan_in = static_cast<double>(in_c * k * k);
  const double gain = std::sqrt(2.0 / (1.0 + static_cast<double>(slope) * slope));
  const double bound = gain_scale * gain * std::sqrt(3.0 / fan_in);
  Tensor<float> w({out_c, in_c, k, k});
  for (float& v : w.values()) v = static_cast<float>(rng.uniform(-bound, bound));
  store.set(name + ".w", std::move(w));
  store.set(name + ".b", Tensor<float>({out_c}));
}

void expect_conv(const WeightStore& store, const std::string& name, std::size_t out_c, std::size_t in_c,
                 std::size_t k) {
  store.expect(name + ".w", {out_c, in_c, k, k});
  store.expect(name + ".b", {out_c});
}

std::vector<double> read_config(const WeightStore& store, const std::string& name, std::size_t count) {
  const Tensor<float>& t = store.get(name);
  if (t.size() != count) {
    throw LoadError("weights: config record '" + name + "' has " + std::to_string(t.size()) + " values, expected " +
                    std::to_string(count));
  }
  return {t.values().begin(), t.values().end()};
}

}  // namespace thermo
