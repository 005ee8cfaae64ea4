#pragma once

#include <cstddef>

#include "thermo/core/tensor.hpp"
#include "thermo/sim/camera.hpp"

namespace thermo {

// Temperature range mapped onto [0, 1] before entering a network.
inline constexpr double kNetTempMin = -10.0;
inline constexpr double kNetTempMax = 120.0;

// Ambient temperature as a unit-range value over the operating envelope.
inline double ambient_unit(double t_amb) { return (t_amb - kAmbientMin) / (kAmbientMax - kAmbientMin); }

// r^2 / 2 per pixel, in [0, 1].
template <typename T>
Tensor<T> radius_channel(std::size_t height, std::size_t width) {
  Tensor<T> out = Tensor<T>::chw(1, height, width);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const double r = normalized_radius(y, x, height, width);
      out.at(0, y, x) = static_cast<T>(0.5 * r * r);
    }
  }
  return out;
}

}  // namespace thermo
