#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace thermo {

enum class Unit { celsius, graylevel, dimensionless };

std::string_view to_string(Unit unit);

/// Row-major 2-D grid of 32-bit samples with a physical unit tag.
///
/// Plays the roles of ground-truth, NUC and SR temperature maps (celsius)
/// and raw camera frames (graylevel).
class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(std::size_t height, std::size_t width, Unit unit = Unit::celsius, float fill = 0.0F);
  Grid2D(std::size_t height, std::size_t width, std::vector<float> values, Unit unit = Unit::celsius);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  Unit unit() const { return unit_; }

  float& operator()(std::size_t y, std::size_t x) { return values_[y * width_ + x]; }
  float operator()(std::size_t y, std::size_t x) const { return values_[y * width_ + x]; }

  std::span<float> values() { return values_; }
  std::span<const float> values() const { return values_; }
  const std::vector<float>& storage() const { return values_; }
  float* data() { return values_.data(); }
  const float* data() const { return values_.data(); }

  // Same samples, different unit tag.
  Grid2D retagged(Unit unit) const;
  bool same_shape(const Grid2D& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }
  bool all_finite() const;

  friend bool operator==(const Grid2D&, const Grid2D&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  Unit unit_ = Unit::celsius;
  std::vector<float> values_;
};

// Extract the rectangle [y0, y0+h) x [x0, x0+w).
Grid2D crop(const Grid2D& grid, std::size_t y0, std::size_t x0, std::size_t h, std::size_t w);

double mean(const Grid2D& grid);

}  // namespace thermo
