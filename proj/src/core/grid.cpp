#include "thermo/core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "thermo/core/error.hpp"
#include "thermo/core/tensor.hpp"

namespace thermo {

std::string_view to_string(Unit unit) {
  switch (unit) {
    case Unit::celsius:
      return "celsius";
    case Unit::graylevel:
      return "graylevel";
    case Unit::dimensionless:
      return "dimensionless";
  }
  return "unknown";
}

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
  os << ')';
  return os.str();
}

Grid2D::Grid2D(std::size_t height, std::size_t width, Unit unit, float fill)
    : height_(height), width_(width), unit_(unit), values_(height * width, fill) {
  require(height >= 1 && width >= 1, "grid: dimensions must be at least 1x1");
}

Grid2D::Grid2D(std::size_t height, std::size_t width, std::vector<float> values, Unit unit)
    : height_(height), width_(width), unit_(unit), values_(std::move(values)) {
  require(height >= 1 && width >= 1, "grid: dimensions must be at least 1x1");
  require(values_.size() == height * width, "grid: value count does not match H*W");
}

Grid2D Grid2D::retagged(Unit unit) const {
  Grid2D out = *this;
  out.unit_ = unit;
  return out;
}

bool Grid2D::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](float v) { return std::isfinite(v); });
}

Grid2D crop(const Grid2D& grid, std::size_t y0, std::size_t x0, std::size_t h, std::size_t w) {
  require(y0 + h <= grid.height() && x0 + w <= grid.width(), "crop: rectangle exceeds grid");
  Grid2D out(h, w, grid.unit());
  for (std::size_t y = 0; y < h; ++y) {
    std::copy_n(grid.data() + (y0 + y) * grid.width() + x0, w, out.data() + y * w);
  }
  return out;
}

double mean(const Grid2D& grid) {
  require(!grid.empty(), "mean: empty grid");
  double s = 0.0;
  for (float v : grid.values()) s += v;
  return s / static_cast<double>(grid.size());
}

}  // namespace thermo
