#pragma once

#include "thermo/core/grid.hpp"
#include "thermo/metrics/ssim_kernel.hpp"
#include "thermo/nn/graph.hpp"

namespace thermo {

inline constexpr double kSsimLossWeight = 1e-3;
// SSIM dynamic range for the loss: the network temperature span, which is
// SSIM on maps normalized to [0, 1].
inline constexpr double kLossSsimRange = 130.0;

// Standard SSIM parameters with the window shrunk (odd) to fit small maps.
SsimParams loss_ssim_params(std::size_t height, std::size_t width);

// MAE + 1e-3 * (1 - SSIM) / 2.
double loss(const Grid2D& sr, const Grid2D& gt);

template <typename T>
typename Graph<T>::Var loss_graph(Graph<T>& g, typename Graph<T>::Var sr, const Tensor<T>& gt) {
  const SsimParams params = loss_ssim_params(gt.height(), gt.width());
  return g.add(g.mae(sr, gt), g.affine(g.ssim_loss(sr, gt, params), static_cast<T>(kSsimLossWeight), T{0}));
}

}  // namespace thermo
