#include "thermo/core/conv.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "thermo/core/parallel.hpp"

namespace thermo {
namespace {

constexpr std::size_t kOutBlock = 8;
constexpr std::size_t kColBlock = 16;
// Partial sums stay in T for at most this many taps before being folded
// into the double accumulator.
constexpr std::size_t kTapChunk = 64;

// Lowers one output row into a (taps x padded_width) matrix.
template <typename T>
void im2row(const Tensor<T>& in, std::size_t y, std::size_t kh, std::size_t kw, std::size_t pad,
            std::size_t out_w, std::size_t padded_w, std::vector<T>& col) {
  const std::size_t c_in = in.channels();
  const std::size_t h = in.height();
  const std::size_t w = in.width();
  const long py = static_cast<long>(pad);
  for (std::size_t ic = 0; ic < c_in; ++ic) {
    const T* plane = in.data() + ic * h * w;
    for (std::size_t ky = 0; ky < kh; ++ky) {
      const long sy = static_cast<long>(y + ky) - py;
      for (std::size_t kx = 0; kx < kw; ++kx) {
        T* row = col.data() + ((ic * kh + ky) * kw + kx) * padded_w;
        if (sy < 0 || sy >= static_cast<long>(h)) {
          std::fill_n(row, padded_w, T{});
          continue;
        }
        const T* src = plane + static_cast<std::size_t>(sy) * w;
        const long off = static_cast<long>(kx) - py;
        for (std::size_t x = 0; x < padded_w; ++x) {
          const long sx = static_cast<long>(x) + off;
          row[x] = (x < out_w && sx >= 0 && sx < static_cast<long>(w)) ? src[sx] : T{};
        }
      }
    }
  }
}

template <std::size_t OB, typename T>
void micro_kernel(const T* col, std::size_t padded_w, const T* wt, std::size_t out_c, std::size_t taps,
                  std::size_t oc0, std::size_t x0, double (&acc)[kOutBlock][kColBlock]) {
  for (std::size_t o = 0; o < OB; ++o)
    for (std::size_t j = 0; j < kColBlock; ++j) acc[o][j] = 0.0;
  for (std::size_t k0 = 0; k0 < taps; k0 += kTapChunk) {
    const std::size_t k1 = std::min(taps, k0 + kTapChunk);
    T part[OB][kColBlock] = {};
    for (std::size_t k = k0; k < k1; ++k) {
      const T* c = col + k * padded_w + x0;
      const T* wk = wt + k * out_c + oc0;
#pragma GCC unroll 8
      for (std::size_t o = 0; o < OB; ++o) {
        const T wv = wk[o];
#pragma GCC unroll 16
        for (std::size_t j = 0; j < kColBlock; ++j) part[o][j] += wv * c[j];
      }
    }
    for (std::size_t o = 0; o < OB; ++o)
      for (std::size_t j = 0; j < kColBlock; ++j) acc[o][j] += static_cast<double>(part[o][j]);
  }
}

template <typename T>
void check_conv_shapes(const Tensor<T>& input, const Tensor<T>& weights, const Tensor<T>& bias) {
  require(input.rank() == 3, "conv2d: input must be C x H x W");
  require(weights.rank() == 4, "conv2d: weights must be out x in x kh x kw");
  require(bias.rank() == 1 && bias.dim(0) == weights.dim(0), "conv2d: bias length must equal out channels");
  require(weights.dim(1) == input.channels(),
          "conv2d: kernel expects " + std::to_string(weights.dim(1)) + " input channels, got " +
              std::to_string(input.channels()));
}

}  // namespace

template <typename T>
ConvKernel<T>::ConvKernel(Tensor<T> weights, Tensor<T> bias, std::size_t padding, std::size_t stride)
    : weights_(std::move(weights)), bias_(std::move(bias)), padding_(padding), stride_(stride) {
  require(weights_.rank() == 4, "conv kernel: weights must be rank 4");
  require(bias_.rank() == 1 && bias_.dim(0) == weights_.dim(0), "conv kernel: bias length must equal out channels");
  require(stride_ == 1, "conv kernel: only stride 1 is supported");
  if (!weights_.all_finite() || !bias_.all_finite()) {
    throw ParameterError("conv kernel: non-finite weights");
  }
}

template <typename T>
ConvKernel<T> ConvKernel<T>::same(Tensor<T> weights, Tensor<T> bias) {
  require(weights.rank() == 4 && weights.dim(2) % 2 == 1 && weights.dim(3) == weights.dim(2),
          "conv kernel: same padding needs a square odd kernel");
  const std::size_t pad = (weights.dim(2) - 1) / 2;
  return ConvKernel(std::move(weights), std::move(bias), pad);
}

template <typename T>
Tensor<T> conv2d(const Tensor<T>& input, const Tensor<T>& weights, const Tensor<T>& bias, std::size_t padding) {
  check_conv_shapes(input, weights, bias);
  const std::size_t out_c = weights.dim(0);
  const std::size_t kh = weights.dim(2);
  const std::size_t kw = weights.dim(3);
  require(input.height() + 2 * padding >= kh && input.width() + 2 * padding >= kw,
          "conv2d: kernel larger than padded input");
  const std::size_t out_h = input.height() + 2 * padding - kh + 1;
  const std::size_t out_w = input.width() + 2 * padding - kw + 1;
  const std::size_t taps = input.channels() * kh * kw;
  const std::size_t padded_w = (out_w + kColBlock - 1) / kColBlock * kColBlock;

  // Transposed weights: taps x out_c, so one tap's weights are contiguous.
  std::vector<T> wt(taps * out_c);
  for (std::size_t o = 0; o < out_c; ++o)
    for (std::size_t k = 0; k < taps; ++k) wt[k * out_c + o] = weights[o * taps + k];

  Tensor<T> out = Tensor<T>::chw(out_c, out_h, out_w);
  parallel_for(out_h, [&](std::size_t y0, std::size_t y1) {
    std::vector<T> col(taps * padded_w);
    double acc[kOutBlock][kColBlock];
    for (std::size_t y = y0; y < y1; ++y) {
      im2row(input, y, kh, kw, padding, out_w, padded_w, col);
      for (std::size_t oc0 = 0; oc0 < out_c; oc0 += kOutBlock) {
        const std::size_t ob = std::min(kOutBlock, out_c - oc0);
        for (std::size_t x0 = 0; x0 < padded_w; x0 += kColBlock) {
          switch (ob) {
            case 8: micro_kernel<8>(col.data(), padded_w, wt.data(), out_c, taps, oc0, x0, acc); break;
            case 7: micro_kernel<7>(col.data(), padded_w, wt.data(), out_c, taps, oc0, x0, acc); break;
            case 6: micro_kernel<6>(col.data(), padded_w, wt.data(), out_c, taps, oc0, x0, acc); break;
            case 5: micro_kernel<5>(col.data(), padded_w, wt.data(), out_c, taps, oc0, x0, acc); break;
            case 4: micro_kernel<4>(col.data(), padded_w, wt.data(), out_c, taps, oc0, x0, acc); break;
            case 3: micro_kernel<3>(col.data(), padded_w, wt.data(), out_c, taps, oc0, x0, acc); break;
            case 2: micro_kernel<2>(col.data(), padded_w, wt.data(), out_c, taps, oc0, x0, acc); break;
            default: micro_kernel<1>(col.data(), padded_w, wt.data(), out_c, taps, oc0, x0, acc); break;
          }
          const std::size_t xe = std::min(out_w, x0 + kColBlock);
          for (std::size_t o = 0; o < ob; ++o) {
            const double b = static_cast<double>(bias[oc0 + o]);
            T* dst = out.data() + ((oc0 + o) * out_h + y) * out_w;
            for (std::size_t x = x0; x < xe; ++x) dst[x] = static_cast<T>(acc[o][x - x0] + b);
          }
        }
      }
    }
  });
  return out;
}

template <typename T>
Tensor<T> conv2d_grad_input(const Tensor<T>& grad_out, const Tensor<T>& weights, std::size_t padding,
                            std::size_t in_height, std::size_t in_width) {
  require(weights.rank() == 4 && grad_out.rank() == 3 && grad_out.channels() == weights.dim(0),
          "conv2d_grad_input: shape mismatch");
  const std::size_t out_c = weights.dim(0);
  const std::size_t in_c = weights.dim(1);
  const std::size_t kh = weights.dim(2);
  const std::size_t kw = weights.dim(3);
  require(padding < kh && padding < kw, "conv2d_grad_input: padding must be smaller than the kernel");
  // Correlation with the spatially flipped, channel-transposed kernel.
  Tensor<T> flipped({in_c, out_c, kh, kw});
  for (std::size_t o = 0; o < out_c; ++o)
    for (std::size_t i = 0; i < in_c; ++i)
      for (std::size_t ky = 0; ky < kh; ++ky)
        for (std::size_t kx = 0; kx < kw; ++kx)
          flipped[((i * out_c + o) * kh + ky) * kw + kx] =
              weights[((o * in_c + i) * kh + (kh - 1 - ky)) * kw + (kw - 1 - kx)];
  Tensor<T> zero_bias({in_c});
  const std::size_t pad_y = kh - 1 - padding;
  require(kw - 1 - padding == pad_y, "conv2d_grad_input: anisotropic padding unsupported");
  Tensor<T> g = conv2d(grad_out, flipped, zero_bias, pad_y);
  require(g.height() == in_height && g.width() == in_width, "conv2d_grad_input: inconsistent dimensions");
  return g;
}

template <typename T>
void conv2d_grad_params(const Tensor<T>& input, const Tensor<T>& grad_out, std::size_t padding,
                        Tensor<T>& grad_w, Tensor<T>& grad_b) {
  const std::size_t out_c = grad_w.dim(0);
  const std::size_t kh = grad_w.dim(2);
  const std::size_t kw = grad_w.dim(3);
  require(grad_out.channels() == out_c && grad_w.dim(1) == input.channels(), "conv2d_grad_params: shape mismatch");
  const std::size_t out_h = grad_out.height();
  const std::size_t out_w = grad_out.width();
  const std::size_t taps = input.channels() * kh * kw;
  const std::size_t n = out_h * out_w;

  // Full lowering: taps x n, n = every output pixel.
  std::vector<T> col(taps * n);
  {
    const std::size_t padded_w = out_w;
    std::vector<T> rowbuf(taps * padded_w);
    for (std::size_t y = 0; y < out_h; ++y) {
      im2row(input, y, kh, kw, padding, out_w, padded_w, rowbuf);
      for (std::size_t k = 0; k < taps; ++k)
        std::copy_n(rowbuf.data() + k * padded_w, out_w, col.data() + k * n + y * out_w);
    }
  }

  constexpr std::size_t kLane = 16;
  constexpr std::size_t kChunk = 256;
  parallel_for(out_c, [&](std::size_t o0, std::size_t o1) {
    for (std::size_t o = o0; o < o1; ++o) {
      const T* g = grad_out.data() + o * n;
      double bsum = 0.0;
      for (std::size_t i = 0; i < n; ++i) bsum += static_cast<double>(g[i]);
      grad_b[o] += static_cast<T>(bsum);
      for (std::size_t k = 0; k < taps; ++k) {
        const T* c = col.data() + k * n;
        double total = 0.0;
        for (std::size_t i0 = 0; i0 < n; i0 += kChunk) {
          const std::size_t i1 = std::min(n, i0 + kChunk);
          T lane[kLane] = {};
          std::size_t i = i0;
          for (; i + kLane <= i1; i += kLane) {
#pragma GCC unroll 16
            for (std::size_t j = 0; j < kLane; ++j) lane[j] += g[i + j] * c[i + j];
          }
          double part = 0.0;
          for (std::size_t j = 0; j < kLane; ++j) part += static_cast<double>(lane[j]);
          for (; i < i1; ++i) part += static_cast<double>(g[i]) * static_cast<double>(c[i]);
          total += part;
        }
        grad_w[o * taps + k] += static_cast<T>(total);
      }
    }
  });
}

template class ConvKernel<float>;
template class ConvKernel<double>;
template Tensor<float> conv2d(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&, std::size_t);
template Tensor<double> conv2d(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&, std::size_t);
template Tensor<float> conv2d_grad_input(const Tensor<float>&, const Tensor<float>&, std::size_t, std::size_t,
                                         std::size_t);
template Tensor<double> conv2d_grad_input(const Tensor<double>&, const Tensor<double>&, std::size_t, std::size_t,
                                          std::size_t);
template void conv2d_grad_params(const Tensor<float>&, const Tensor<float>&, std::size_t, Tensor<float>&,
                                 Tensor<float>&);
template void conv2d_grad_params(const Tensor<double>&, const Tensor<double>&, std::size_t, Tensor<double>&,
                                 Tensor<double>&);

}  // namespace thermo
