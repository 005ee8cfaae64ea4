#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "thermo/nn/graph.hpp"
#include "thermo/nn/layers.hpp"
#include "thermo/nn/weight_store.hpp"
#include "thermo/nuc/registration.hpp"
#include "thermo/sim/simulator.hpp"

namespace thermo {

/// Multi-frame NUC network.
///
/// A mean-temperature estimator (affine over burst statistics and t_amb)
/// gives T_mean. The kernel net sees the registered frames centered on the
/// burst mean gray level, t_amb, r^2 / 2 and T_mean, and predicts per pixel
/// N k x k kernels (softmax over all N k^2 taps), a gain g and an offset d:
///   T = T_mean + delta_scale * d + g * sum_f sum_t w[f, t] c_f[p + t]
/// with c_f = (L_f - mean gray) / gain_nominal and g = softplus(raw) + 1e-3.
struct MultiNucConfig {
  std::size_t frames = 7;
  std::size_t depth = 6;
  std::size_t width = 32;
  std::size_t kernel = 5;
  float slope = 0.1F;
  double gain_nominal = 1.0;
  double offset_nominal = 0.0;
  double delta_scale = 10.0;

  void validate() const;
  std::size_t taps() const { return frames * kernel * kernel; }
  friend bool operator==(const MultiNucConfig&, const MultiNucConfig&) = default;
};

struct MultiNucOptions {
  bool register_frames = true;
  std::size_t search_radius = kDefaultSearchRadius;
};

inline constexpr std::size_t kMeanFeatures = 5;
// Initial logit given to the center tap of every frame.
inline constexpr float kCenterLogit = 4.0F;
inline constexpr double kGainEpsilonMulti = 1e-3;

using MeanFeatures = std::array<double, kMeanFeatures>;

// [m, m v, v, v^2, m v^2] with m = (mean gray - offset_nominal) / gain_nominal
// and v = ambient_unit(t_amb) - 0.5.
MeanFeatures mean_features(double mean_gray, double t_amb, const MultiNucConfig& cfg);

/// Burst after registration, canonical ordering and centering.
struct PreparedBurst {
  std::size_t height = 0;
  std::size_t width = 0;
  // N x h x w; channel 0 is the reference frame, others sorted by shift then content.
  Tensor<double> centered;
  double mean_gray = 0.0;
  MeanFeatures features{};
  double t_amb = 0.0;
  std::vector<std::size_t> order;
  RegistrationResult registration;
};

PreparedBurst prepare_burst(const Burst& burst, double t_amb, const MultiNucConfig& cfg,
                            const MultiNucOptions& options = {});

// Kaiming trunk, zero head weights; estimator returns m; kernels favor frame centers; g = 1, d = 0.
WeightStore init_multi_nuc(const MultiNucConfig& cfg, std::uint64_t seed);

MultiNucConfig multi_nuc_config(const WeightStore& weights);

template <typename T>
struct MultiNucVars {
  typename Graph<T>::Var temperature;
  typename Graph<T>::Var mean;
  typename Graph<T>::Var kernels;
  typename Graph<T>::Var fused;
};

template <typename T>
typename Graph<T>::Var mean_temp_graph(Binder<T>& params, const MeanFeatures& features);

template <typename T>
MultiNucVars<T> multi_nuc_graph(Binder<T>& params, const MultiNucConfig& cfg, const PreparedBurst& burst);

double estimate_mean_temp(const Burst& burst, double t_amb, const WeightStore& weights);

struct MultiNucOutput {
  Grid2D temperature;
  // Softmax-fused centered frames before gain and offset.
  Grid2D fused;
  // N k^2 x h x w tap weights (canonical frame order).
  Tensor<float> kernels;
  double mean_temp = 0.0;
  PreparedBurst prepared;
};

MultiNucOutput nuc_multi_detail(const Burst& burst, double t_amb, const WeightStore& weights,
                                const MultiNucOptions& options = {});
Grid2D nuc_multi(const Burst& burst, double t_amb, const WeightStore& weights, const MultiNucOptions& options = {});

}  // namespace thermo
