#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "thermo/core/grid.hpp"

namespace thermo {

/// Synthetic orchard-like temperature map: warm soil with smooth gradients,
/// rows of cooler tree crowns with soft edges, and sensor-scale texture.
struct Scene {
  Grid2D temperature;
  // 1 where the pixel belongs to a crown.
  std::vector<std::uint8_t> canopy_mask;
};

Scene canopy_scene(std::size_t height, std::size_t width, double t_amb, std::uint64_t seed);

}  // namespace thermo
