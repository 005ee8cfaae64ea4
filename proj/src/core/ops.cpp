#include "thermo/core/ops.hpp"

#include <algorithm>

namespace thermo {

template <typename T>
Tensor<T> leaky_relu(const Tensor<T>& input, T slope) {
  require(slope >= T{0} && slope < T{1}, "leaky_relu: slope must lie in [0, 1)");
  Tensor<T> out = input;
  for (T& v : out.values()) v = v >= T{0} ? v : slope * v;
  return out;
}

template <typename T>
Tensor<T> pixel_shuffle(const Tensor<T>& input, std::size_t s) {
  require(s >= 1, "pixel_shuffle: scale must be >= 1");
  const std::size_t c_in = input.channels();
  require(c_in % (s * s) == 0, "pixel_shuffle: channels " + std::to_string(c_in) + " not divisible by s^2");
  const std::size_t c = c_in / (s * s);
  const std::size_t h = input.height();
  const std::size_t w = input.width();
  Tensor<T> out = Tensor<T>::chw(c, h * s, w * s);
  for (std::size_t oc = 0; oc < c; ++oc)
    for (std::size_t y = 0; y < h * s; ++y)
      for (std::size_t x = 0; x < w * s; ++x)
        out.at(oc, y, x) = input.at(oc * s * s + (y % s) * s + (x % s), y / s, x / s);
  return out;
}

template <typename T>
Tensor<T> pixel_unshuffle(const Tensor<T>& input, std::size_t s) {
  require(s >= 1, "pixel_unshuffle: scale must be >= 1");
  require(input.height() % s == 0 && input.width() % s == 0, "pixel_unshuffle: dims not divisible by s");
  const std::size_t c = input.channels();
  const std::size_t h = input.height() / s;
  const std::size_t w = input.width() / s;
  Tensor<T> out = Tensor<T>::chw(c * s * s, h, w);
  for (std::size_t oc = 0; oc < c; ++oc)
    for (std::size_t y = 0; y < h * s; ++y)
      for (std::size_t x = 0; x < w * s; ++x)
        out.at(oc * s * s + (y % s) * s + (x % s), y / s, x / s) = input.at(oc, y, x);
  return out;
}

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  require(a.height() == b.height() && a.width() == b.width(), "concat_channels: spatial dimensions differ");
  std::vector<T> v;
  v.reserve(a.size() + b.size());
  v.insert(v.end(), a.values().begin(), a.values().end());
  v.insert(v.end(), b.values().begin(), b.values().end());
  return Tensor<T>({a.channels() + b.channels(), a.height(), a.width()}, std::move(v));
}

template <typename T>
Tensor<T> slice_channels(const Tensor<T>& input, std::size_t begin, std::size_t count) {
  require(count >= 1 && begin + count <= input.channels(), "slice_channels: range exceeds channels");
  const std::size_t p = input.plane_size();
  std::vector<T> v(input.data() + begin * p, input.data() + (begin + count) * p);
  return Tensor<T>({count, input.height(), input.width()}, std::move(v));
}

#define THERMO_INSTANTIATE_OPS(T)                                                \
  template Tensor<T> leaky_relu(const Tensor<T>&, T);                            \
  template Tensor<T> pixel_shuffle(const Tensor<T>&, std::size_t);               \
  template Tensor<T> pixel_unshuffle(const Tensor<T>&, std::size_t);             \
  template Tensor<T> concat_channels(const Tensor<T>&, const Tensor<T>&);        \
  template Tensor<T> slice_channels(const Tensor<T>&, std::size_t, std::size_t);

THERMO_INSTANTIATE_OPS(float)
THERMO_INSTANTIATE_OPS(double)

}  // namespace thermo
