#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace thermo {

struct SsimParams {
  std::size_t window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  // Dynamic range of the samples.
  double range = 1.0;
};

// Normalized 1-D Gaussian window.
std::vector<double> gaussian_window(std::size_t size, double sigma);

// Mean SSIM over all fully contained windows ("valid" placement). When
// grad_a is non-empty it receives d(mean SSIM)/da.
double ssim_valid(std::span<const double> a, std::span<const double> b, std::size_t height, std::size_t width,
                  const SsimParams& params, std::span<double> grad_a = {});

}  // namespace thermo
