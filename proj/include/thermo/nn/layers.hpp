#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "thermo/core/conv.hpp"
#include "thermo/nn/graph.hpp"
#include "thermo/nn/weight_store.hpp"
#include "thermo/sim/random.hpp"

namespace thermo {

/// Maps parameter names to graph leaves, binding each name once.
template <typename T>
class Binder {
 public:
  using Var = typename Graph<T>::Var;

  Binder(Graph<T>& graph, const TensorMap<T>& params) : graph_(graph), params_(params) {}

  Var operator()(const std::string& name) {
    auto it = bound_.find(name);
    if (it != bound_.end()) return it->second;
    auto p = params_.find(name);
    if (p == params_.end()) throw LoadError("weights: missing record '" + name + "'");
    Var v = graph_.parameter(p->second);
    bound_.emplace(name, v);
    return v;
  }

  Graph<T>& graph() { return graph_; }
  const std::map<std::string, Var>& bound() const { return bound_; }

 private:
  Graph<T>& graph_;
  const TensorMap<T>& params_;
  std::map<std::string, Var> bound_;
};

// conv(name.w, name.b) with same padding, optionally followed by leaky ReLU.
template <typename T>
typename Graph<T>::Var conv_block(Binder<T>& p, const std::string& name, typename Graph<T>::Var x, bool activate,
                                  T slope) {
  Graph<T>& g = p.graph();
  const std::size_t k = g.value(p(name + ".w")).dim(2);
  auto y = g.conv2d(x, p(name + ".w"), p(name + ".b"), (k - 1) / 2);
  return activate ? g.leaky_relu(y, slope) : y;
}

// x + conv_b(act(conv_a(x))).
template <typename T>
typename Graph<T>::Var residual_block(Binder<T>& p, const std::string& name, typename Graph<T>::Var x, T slope) {
  auto h = conv_block(p, name + ".a", x, true, slope);
  h = conv_block(p, name + ".b", h, false, slope);
  return p.graph().add(x, h);
}

// Standalone residual block on a feature map: input + second(act(first(input))).
Tensor3 residual_block(const Tensor3& input, const ConvKernel<float>& first, const ConvKernel<float>& second,
                       float slope);

// Kaiming-uniform (fan-in, leaky-ReLU gain) conv weights scaled by `gain_scale`, zero bias.
void init_conv(WeightStore& store, const std::string& name, std::size_t out_c, std::size_t in_c, std::size_t k,
               float slope, Rng& rng, double gain_scale = 1.0);

// Checks that name.w / name.b exist with the given geometry.
void expect_conv(const WeightStore& store, const std::string& name, std::size_t out_c, std::size_t in_c,
                 std::size_t k);

// Reads a config record as doubles, requiring exactly `count` values.
std::vector<double> read_config(const WeightStore& store, const std::string& name, std::size_t count);

}  // namespace thermo
