#include "thermo/sim/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thermo/sim/random.hpp"

namespace thermo {

Scene canopy_scene(std::size_t height, std::size_t width, double t_amb, std::uint64_t seed) {
  Rng rng(hash_key(seed, 0x7363656e65ULL));
  const double h = static_cast<double>(height);
  const double w = static_cast<double>(width);
  const double unit = std::min(h, w);

  const double soil = t_amb + rng.uniform(7.0, 15.0);
  const double grad_y = rng.uniform(-3.0, 3.0);
  const double grad_x = rng.uniform(-3.0, 3.0);
  const double wave_amp = rng.uniform(0.5, 2.0);
  const double wave_fy = rng.uniform(1.0, 3.0) * 2.0 * std::numbers::pi / h;
  const double wave_fx = rng.uniform(1.0, 3.0) * 2.0 * std::numbers::pi / w;
  const double wave_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);

  struct Crown {
    double cy, cx, ry, rx, temp, core;
  };
  std::vector<Crown> crowns;
  const int rows = static_cast<int>(rng.integer(2, 4));
  const double row_angle = rng.uniform(-0.3, 0.3);
  for (int r = 0; r < rows; ++r) {
    const double base_y = (static_cast<double>(r) + 0.5) * h / rows + rng.uniform(-0.05, 0.05) * h;
    const int per_row = static_cast<int>(rng.integer(2, 4));
    for (int k = 0; k < per_row; ++k) {
      Crown c{};
      c.cx = (static_cast<double>(k) + rng.uniform(0.3, 0.7)) * w / per_row;
      c.cy = base_y + std::tan(row_angle) * (c.cx - w / 2.0);
      c.ry = unit * rng.uniform(0.07, 0.14);
      c.rx = c.ry * rng.uniform(0.8, 1.3);
      c.temp = t_amb + rng.uniform(-4.0, 2.0);
      c.core = rng.uniform(0.5, 2.0);
      crowns.push_back(c);
    }
  }
  struct Spot {
    double cy, cx, r, amp;
  };
  std::vector<Spot> spots;
  const int n_spots = static_cast<int>(rng.integer(1, 4));
  for (int k = 0; k < n_spots; ++k)
    spots.push_back({rng.uniform(0.0, h), rng.uniform(0.0, w), unit * rng.uniform(0.03, 0.08), rng.uniform(2.0, 6.0)});

  Scene scene{Grid2D(height, width, Unit::celsius), std::vector<std::uint8_t>(height * width, 0)};
  const std::uint64_t tex_seed = hash_key(seed, 0x746578ULL);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const double fy = static_cast<double>(y);
      const double fx = static_cast<double>(x);
      double t = soil + grad_y * (fy / h - 0.5) + grad_x * (fx / w - 0.5) +
                 wave_amp * std::sin(wave_fy * fy + wave_fx * fx + wave_phase);
      for (const auto& s : spots) {
        const double d2 = ((fy - s.cy) * (fy - s.cy) + (fx - s.cx) * (fx - s.cx)) / (s.r * s.r);
        t += s.amp * std::exp(-d2);
      }
      double cover = 0.0;
      double crown_t = 0.0;
      for (const auto& c : crowns) {
        const double dy = (fy - c.cy) / c.ry;
        const double dx = (fx - c.cx) / c.rx;
        const double d = std::sqrt(dy * dy + dx * dx);
        // Soft edge about one pixel wide.
        const double edge = 1.0 / (1.0 + std::exp((d - 1.0) * c.ry * 2.5));
        if (edge > cover) {
          cover = edge;
          crown_t = c.temp - c.core * std::max(0.0, 1.0 - d * d);
        }
      }
      t = (1.0 - cover) * t + cover * crown_t;
      t += 0.15 * keyed_gaussian(tex_seed, y, x);
      scene.temperature(y, x) = static_cast<float>(t);
      scene.canopy_mask[y * width + x] = cover > 0.5 ? 1 : 0;
    }
  }
  return scene;
}

}  // namespace thermo
