#pragma once

#include <cstddef>

#include "thermo/core/tensor.hpp"

namespace thermo {

// x >= 0 -> x, x < 0 -> slope * x. slope in [0, 1).
template <typename T>
Tensor<T> leaky_relu(const Tensor<T>& input, T slope);

// (C*s*s) x H x W  ->  C x sH x sW with
// out[c, y, x] = in[c*s*s + (y mod s)*s + (x mod s), y/s, x/s].
template <typename T>
Tensor<T> pixel_shuffle(const Tensor<T>& input, std::size_t s);

// Inverse permutation of pixel_shuffle (also its adjoint).
template <typename T>
Tensor<T> pixel_unshuffle(const Tensor<T>& input, std::size_t s);

// a occupies the leading channels. A zero-channel operand is represented
// by an empty tensor and leaves the other operand unchanged.
template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b);

template <typename T>
Tensor<T> slice_channels(const Tensor<T>& input, std::size_t begin, std::size_t count);

}  // namespace thermo
