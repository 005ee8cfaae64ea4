#pragma once

#include <cstddef>
#include <cstdint>

#include "thermo/nn/graph.hpp"
#include "thermo/nn/layers.hpp"
#include "thermo/nn/weight_store.hpp"

namespace thermo {

/// Two-lane pixel-shuffle super-resolution net with a bicubic skip.
///
///   F     = act(conv(normalize(T)))
///   lanes = concat(shuffle(R residual blocks(F)), shuffle(F))
///   SR    = span * fuse(lanes) + bicubic(T, s)
/// normalize maps [-10, 120] C onto [0, 1]; span = 130.
struct SrConfig {
  std::size_t scale = 2;
  std::size_t channels = 32;
  std::size_t blocks = 4;
  float slope = 0.1F;

  void validate() const;
  std::size_t lane_channels() const { return channels / (scale * scale); }
  friend bool operator==(const SrConfig&, const SrConfig&) = default;
};

// Kaiming feature and residual convs; the fusion conv starts at zero so the
// untrained net is exactly its bicubic skip.
WeightStore init_sr(const SrConfig& cfg, std::uint64_t seed);

// Config from the weights; LoadError on missing records or bad shapes.
SrConfig sr_config(const WeightStore& weights);

template <typename T>
struct SrVars {
  typename Graph<T>::Var output;
  // span * fuse(lanes), the learned residual over bicubic.
  typename Graph<T>::Var branch;
};

template <typename T>
SrVars<T> sr_graph(Binder<T>& params, const SrConfig& cfg, typename Graph<T>::Var t_map);

// LoadError when the weights were built for a different scale.
Grid2D sr_forward(const Grid2D& t_map, const WeightStore& weights, std::size_t s);

// The residual branch alone (sr_forward minus the bicubic skip).
Grid2D sr_branch(const Grid2D& t_map, const WeightStore& weights, std::size_t s);

}  // namespace thermo
