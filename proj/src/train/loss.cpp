#include "thermo/train/loss.hpp"

#include <algorithm>
#include <vector>

#include "thermo/core/error.hpp"
#include "thermo/metrics/metrics.hpp"

namespace thermo {

SsimParams loss_ssim_params(std::size_t height, std::size_t width) {
  SsimParams p;
  p.range = kLossSsimRange;
  const std::size_t fit = std::min(height, width);
  if (fit < p.window) p.window = fit % 2 == 1 ? fit : fit - 1;
  require(p.window >= 1, "loss: map too small");
  return p;
}

double loss(const Grid2D& sr, const Grid2D& gt) {
  require(sr.same_shape(gt), "loss: dimension mismatch");
  const SsimParams p = loss_ssim_params(gt.height(), gt.width());
  std::vector<double> a(sr.values().begin(), sr.values().end());
  std::vector<double> b(gt.values().begin(), gt.values().end());
  const double s = ssim_valid(a, b, gt.height(), gt.width(), p, {});
  return mae(sr, gt) + kSsimLossWeight * (1.0 - s) / 2.0;
}

}  // namespace thermo
