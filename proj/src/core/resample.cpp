#include "thermo/core/resample.hpp"

#include <algorithm>
#include <cmath>

#include "thermo/core/error.hpp"

namespace thermo {

std::size_t scaled_size(std::size_t n, Ratio factor) {
  return (2 * n * factor.num + factor.den) / (2 * factor.den);
}

double cubic_weight(double t) {
  constexpr double a = -0.5;
  t = std::abs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

CubicTaps cubic_taps(std::size_t in_size, std::size_t out_size, Ratio factor) {
  CubicTaps taps;
  taps.index.resize(out_size);
  taps.weight.resize(out_size);
  const double inv = static_cast<double>(factor.den) / static_cast<double>(factor.num);
  const long last = static_cast<long>(in_size) - 1;
  for (std::size_t o = 0; o < out_size; ++o) {
    const double src = (static_cast<double>(o) + 0.5) * inv - 0.5;
    const double base = std::floor(src);
    const double frac = src - base;
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) {
      const long i = static_cast<long>(base) - 1 + k;
      taps.index[o][k] = static_cast<std::size_t>(std::clamp(i, 0L, last));
      taps.weight[o][k] = cubic_weight(frac - static_cast<double>(k - 1));
      sum += taps.weight[o][k];
    }
    for (auto& w : taps.weight[o]) w /= sum;
  }
  return taps;
}

namespace {

void check_factor(Ratio factor) {
  require(factor.num > 0 && factor.den > 0, "bicubic_resample: factor must be positive");
}

}  // namespace

template <typename T>
Tensor<T> bicubic_resample(const Tensor<T>& input, Ratio factor) {
  check_factor(factor);
  const std::size_t h = input.height();
  const std::size_t w = input.width();
  const std::size_t oh = scaled_size(h, factor);
  const std::size_t ow = scaled_size(w, factor);
  require(oh >= 1 && ow >= 1, "bicubic_resample: output would be empty");
  const CubicTaps ty = cubic_taps(h, oh, factor);
  const CubicTaps tx = cubic_taps(w, ow, factor);
  Tensor<T> out = Tensor<T>::chw(input.channels(), oh, ow);
  std::vector<double> rows(h * ow);
  for (std::size_t c = 0; c < input.channels(); ++c) {
    const T* src = input.data() + c * h * w;
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < ow; ++x) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += tx.weight[x][k] * static_cast<double>(src[y * w + tx.index[x][k]]);
        rows[y * ow + x] = s;
      }
    }
    T* dst = out.data() + c * oh * ow;
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t x = 0; x < ow; ++x) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += ty.weight[y][k] * rows[ty.index[y][k] * ow + x];
        dst[y * ow + x] = static_cast<T>(s);
      }
    }
  }
  return out;
}

template <typename T>
Tensor<T> bicubic_resample_adjoint(const Tensor<T>& grad_out, Ratio factor, std::size_t in_h, std::size_t in_w) {
  check_factor(factor);
  const std::size_t oh = grad_out.height();
  const std::size_t ow = grad_out.width();
  require(oh == scaled_size(in_h, factor) && ow == scaled_size(in_w, factor),
          "bicubic_resample_adjoint: inconsistent dimensions");
  const CubicTaps ty = cubic_taps(in_h, oh, factor);
  const CubicTaps tx = cubic_taps(in_w, ow, factor);
  Tensor<T> out = Tensor<T>::chw(grad_out.channels(), in_h, in_w);
  std::vector<double> rows(in_h * ow);
  std::vector<double> acc(in_h * in_w);
  for (std::size_t c = 0; c < grad_out.channels(); ++c) {
    std::fill(rows.begin(), rows.end(), 0.0);
    std::fill(acc.begin(), acc.end(), 0.0);
    const T* g = grad_out.data() + c * oh * ow;
    for (std::size_t y = 0; y < oh; ++y)
      for (std::size_t x = 0; x < ow; ++x)
        for (int k = 0; k < 4; ++k) rows[ty.index[y][k] * ow + x] += ty.weight[y][k] * static_cast<double>(g[y * ow + x]);
    for (std::size_t y = 0; y < in_h; ++y)
      for (std::size_t x = 0; x < ow; ++x)
        for (int k = 0; k < 4; ++k) acc[y * in_w + tx.index[x][k]] += tx.weight[x][k] * rows[y * ow + x];
    T* dst = out.data() + c * in_h * in_w;
    for (std::size_t i = 0; i < in_h * in_w; ++i) dst[i] = static_cast<T>(acc[i]);
  }
  return out;
}

template Tensor<float> bicubic_resample(const Tensor<float>&, Ratio);
template Tensor<double> bicubic_resample(const Tensor<double>&, Ratio);
template Tensor<float> bicubic_resample_adjoint(const Tensor<float>&, Ratio, std::size_t, std::size_t);
template Tensor<double> bicubic_resample_adjoint(const Tensor<double>&, Ratio, std::size_t, std::size_t);

Grid2D bicubic_resample(const Grid2D& input, Ratio factor) {
  return grid_from_tensor(bicubic_resample(tensor_from_grid<float>(input), factor), input.unit());
}

Grid2D downscale_gt(const Grid2D& gt, std::size_t s) {
  require(s >= 1, "downscale_gt: factor must be >= 1");
  require(gt.height() % s == 0 && gt.width() % s == 0,
          "downscale_gt: dimensions " + std::to_string(gt.height()) + "x" + std::to_string(gt.width()) +
              " not divisible by " + std::to_string(s));
  return bicubic_resample(gt, Ratio::down(s));
}

float bilinear_sample(const Grid2D& grid, double y, double x) {
  const double maxy = static_cast<double>(grid.height() - 1);
  const double maxx = static_cast<double>(grid.width() - 1);
  y = std::clamp(y, 0.0, maxy);
  x = std::clamp(x, 0.0, maxx);
  const auto y0 = static_cast<std::size_t>(std::floor(y));
  const auto x0 = static_cast<std::size_t>(std::floor(x));
  const std::size_t y1 = std::min(y0 + 1, grid.height() - 1);
  const std::size_t x1 = std::min(x0 + 1, grid.width() - 1);
  const double fy = y - static_cast<double>(y0);
  const double fx = x - static_cast<double>(x0);
  if (fy == 0.0 && fx == 0.0) return grid(y0, x0);
  const double top = (1.0 - fx) * grid(y0, x0) + fx * grid(y0, x1);
  const double bot = (1.0 - fx) * grid(y1, x0) + fx * grid(y1, x1);
  return static_cast<float>((1.0 - fy) * top + fy * bot);
}

}  // namespace thermo
