#pragma once

#include <cstddef>

#include "thermo/core/tensor.hpp"

namespace thermo {

/// Weights and bias of one 2-D convolution layer (stride 1).
template <typename T>
class ConvKernel {
 public:
  // weights: out x in x kh x kw; bias: out. Rejects non-finite weights.
  ConvKernel(Tensor<T> weights, Tensor<T> bias, std::size_t padding, std::size_t stride = 1);

  // Same-size kernel: padding (k-1)/2, k odd.
  static ConvKernel same(Tensor<T> weights, Tensor<T> bias);

  std::size_t out_channels() const { return weights_.dim(0); }
  std::size_t in_channels() const { return weights_.dim(1); }
  std::size_t kernel_height() const { return weights_.dim(2); }
  std::size_t kernel_width() const { return weights_.dim(3); }
  std::size_t padding() const { return padding_; }
  std::size_t stride() const { return stride_; }
  const Tensor<T>& weights() const { return weights_; }
  const Tensor<T>& bias() const { return bias_; }

 private:
  Tensor<T> weights_;
  Tensor<T> bias_;
  std::size_t padding_;
  std::size_t stride_;
};

// Zero-padded cross-correlation. Output spatial size is H + 2p - kh + 1.
template <typename T>
Tensor<T> conv2d(const Tensor<T>& input, const Tensor<T>& weights, const Tensor<T>& bias,
                 std::size_t padding);

template <typename T>
Tensor<T> conv2d(const Tensor<T>& input, const ConvKernel<T>& kernel) {
  return conv2d(input, kernel.weights(), kernel.bias(), kernel.padding());
}

// Adjoint of conv2d with respect to its input; returns a map of the
// given input height/width.
template <typename T>
Tensor<T> conv2d_grad_input(const Tensor<T>& grad_out, const Tensor<T>& weights, std::size_t padding,
                            std::size_t in_height, std::size_t in_width);

// Accumulates dL/dW and dL/db into grad_w / grad_b (shapes of weights / bias).
template <typename T>
void conv2d_grad_params(const Tensor<T>& input, const Tensor<T>& grad_out, std::size_t padding,
                        Tensor<T>& grad_w, Tensor<T>& grad_b);

}  // namespace thermo
