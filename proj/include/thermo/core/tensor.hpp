#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "thermo/core/error.hpp"
#include "thermo/core/grid.hpp"

namespace thermo {

using Shape = std::vector<std::size_t>;

std::string shape_string(const Shape& shape);

/// Dense row-major array of rank 1..4.
///
/// Feature maps are rank 3 (channels x height x width, channel-major);
/// convolution weights are rank 4 (out x in x kh x kw); biases rank 1.
template <typename T>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, T fill = T{}) : shape_(std::move(shape)) {
    check_rank();
    data_.assign(count(shape_), fill);
  }
  Tensor(Shape shape, std::vector<T> values) : shape_(std::move(shape)), data_(std::move(values)) {
    check_rank();
    require(data_.size() == count(shape_), "tensor: value count does not match shape " + shape_string(shape_));
  }

  static Tensor chw(std::size_t c, std::size_t h, std::size_t w, T fill = T{}) {
    return Tensor({c, h, w}, fill);
  }
  static Tensor scalar(T v) { return Tensor({1, 1, 1}, v); }

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t i) const { return shape_.at(i); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t channels() const { return rank3().at(0); }
  std::size_t height() const { return rank3().at(1); }
  std::size_t width() const { return rank3().at(2); }
  std::size_t plane_size() const { return height() * width(); }

  T& at(std::size_t c, std::size_t y, std::size_t x) { return data_[(c * shape_[1] + y) * shape_[2] + x]; }
  T at(std::size_t c, std::size_t y, std::size_t x) const { return data_[(c * shape_[1] + y) * shape_[2] + x]; }
  T& operator[](std::size_t i) { return data_[i]; }
  T operator[](std::size_t i) const { return data_[i]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  std::span<T> plane(std::size_t c) { return {data_.data() + c * plane_size(), plane_size()}; }
  std::span<const T> plane(std::size_t c) const { return {data_.data() + c * plane_size(), plane_size()}; }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](T v) { return std::isfinite(v); });
  }

  template <typename U>
  Tensor<U> cast() const {
    std::vector<U> out(data_.begin(), data_.end());
    return Tensor<U>(shape_, std::move(out));
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

  static std::size_t count(const Shape& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  }

 private:
  void check_rank() const {
    require(!shape_.empty() && shape_.size() <= 4, "tensor: rank must be 1..4");
  }
  const Shape& rank3() const {
    require(shape_.size() == 3, "tensor: expected a C x H x W feature map, got " + shape_string(shape_));
    return shape_;
  }

  Shape shape_;
  std::vector<T> data_;
};

using Tensor3 = Tensor<float>;

template <typename T>
Tensor<T> tensor_from_grid(const Grid2D& grid) {
  std::vector<T> v(grid.values().begin(), grid.values().end());
  return Tensor<T>({1, grid.height(), grid.width()}, std::move(v));
}

// Channel `c` of a feature map as a grid.
template <typename T>
Grid2D grid_from_tensor(const Tensor<T>& t, Unit unit, std::size_t c = 0) {
  auto p = t.plane(c);
  std::vector<float> v(p.begin(), p.end());
  return Grid2D(t.height(), t.width(), std::move(v), unit);
}

}  // namespace thermo
