#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "thermo/core/grid.hpp"
#include "thermo/core/tensor.hpp"

namespace thermo {

// Positive rational scale factor num/den.
struct Ratio {
  std::size_t num = 1;
  std::size_t den = 1;

  static Ratio up(std::size_t s) { return {s, 1}; }
  static Ratio down(std::size_t s) { return {1, s}; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// round(n * factor), ties away from zero.
std::size_t scaled_size(std::size_t n, Ratio factor);

// Catmull-Rom cubic (a = -0.5).
double cubic_weight(double t);

// Four clamped source indices and weights per output coordinate, using
// half-pixel centers: src = (o + 0.5) / factor - 0.5.
struct CubicTaps {
  std::vector<std::array<std::size_t, 4>> index;
  std::vector<std::array<double, 4>> weight;
};
CubicTaps cubic_taps(std::size_t in_size, std::size_t out_size, Ratio factor);

// Separable bicubic resampling of each channel of a feature map.
template <typename T>
Tensor<T> bicubic_resample(const Tensor<T>& input, Ratio factor);

// Adjoint of bicubic_resample for an input of in_h x in_w.
template <typename T>
Tensor<T> bicubic_resample_adjoint(const Tensor<T>& grad_out, Ratio factor, std::size_t in_h, std::size_t in_w);

Grid2D bicubic_resample(const Grid2D& input, Ratio factor);

// Ground-truth downscale by an integer factor (bicubic, factor 1/s).
Grid2D downscale_gt(const Grid2D& gt, std::size_t s);

// Bilinear sample at fractional (y, x) with edge clamping.
float bilinear_sample(const Grid2D& grid, double y, double x);

}  // namespace thermo
