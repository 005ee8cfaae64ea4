#pragma once

#include <cstddef>
#include <cstdint>

#include "thermo/nn/graph.hpp"
#include "thermo/nn/layers.hpp"
#include "thermo/nn/normalize.hpp"
#include "thermo/nn/weight_store.hpp"
#include "thermo/sim/simulator.hpp"

namespace thermo {

/// Single-frame NUC network: a conv trunk feeding a gain head and an offset
/// head, T = (L - D) / G.
///
/// The network sees the frame pre-scaled by the nominal camera response
/// ((L - offset_nominal) / gain_nominal), the ambient temperature as a
/// constant channel and r^2 / 2. Predictions:
///   G = gain_nominal * (softplus(raw_g) + 1e-3)
///   D = offset_nominal + offset_scale * raw_d
struct SingleNucConfig {
  std::size_t depth = 6;
  std::size_t width = 32;
  float slope = 0.1F;
  double gain_nominal = 1.0;
  double offset_nominal = 0.0;
  double offset_scale = 1.0;

  void validate() const;
  friend bool operator==(const SingleNucConfig&, const SingleNucConfig&) = default;
};

inline constexpr double kGainEpsilon = 1e-3;
inline constexpr std::size_t kSingleNucInputs = 3;

// Fresh weights: Kaiming trunk, zero head weights, heads biased to G = gain_nominal, D = offset_nominal.
WeightStore init_single_nuc(const SingleNucConfig& cfg, std::uint64_t seed);

// Reads the config record and checks every tensor shape (LoadError on mismatch).
SingleNucConfig single_nuc_config(const WeightStore& weights);

template <typename T>
struct SingleNucVars {
  typename Graph<T>::Var temperature;
  typename Graph<T>::Var gain;
  typename Graph<T>::Var offset;
};

template <typename T>
SingleNucVars<T> single_nuc_graph(Binder<T>& params, const SingleNucConfig& cfg, const Grid2D& levels, double t_amb);

struct SingleNucOutput {
  Grid2D temperature;
  Grid2D gain;
  Grid2D offset;
};

SingleNucOutput nuc_single_maps(const GrayFrame& frame, double t_amb, const WeightStore& weights);
Grid2D nuc_single(const GrayFrame& frame, double t_amb, const WeightStore& weights);

}  // namespace thermo
