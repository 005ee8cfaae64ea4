#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "thermo/core/grid.hpp"
#include "thermo/sim/camera.hpp"

namespace thermo {

/// Raw camera output: integer gray levels (stored as float) plus the
/// camera ambient temperature at capture.
struct GrayFrame {
  Grid2D levels;
  double t_amb = 0.0;
};

struct SimulatedFrame {
  GrayFrame frame;
  std::size_t clamped = 0;
  // More than 1% of pixels hit the gray-level range limits.
  bool saturated = false;
};

// L = G * T + D + noise, clamped to [0, 2^depth - 1] and rounded. Noise is
// keyed by (params.seed, frame_index, pixel index).
SimulatedFrame simulate_frame(const Grid2D& true_map, AmbientTemperature t_amb, const CameraParams& params,
                              std::uint64_t frame_index = 0);

// (L - D) / G, the exact inverse of the noise-free response.
Grid2D invert_ideal(const GrayFrame& frame, AmbientTemperature t_amb, const CameraParams& params);

// One-point correction: frame - (reference - mean(reference)), rounded and
// clamped to the gray range of `gray_depth` bits.
GrayFrame flat_field_correct(const GrayFrame& frame, const GrayFrame& reference, unsigned gray_depth = 14);

struct MotionConfig {
  std::size_t out_height = 0;
  std::size_t out_width = 0;
  // Crop-offset bound in pixels (integer offsets unless subpixel_shift).
  double max_shift = 0.0;
  double max_deg = 0.0;
  // Perspective jitter bound for each output-frame corner, pixels.
  double max_px = 0.0;
  bool subpixel_shift = false;
  std::uint64_t seed = 0;
};

/// Geometric transform of one burst frame relative to the centered crop.
/// Frame pixel (y, x) of an identity-motion frame reads map pixel
/// (y + top, x + left); offset_y/offset_x translate that window.
struct Motion {
  double offset_y = 0.0;
  double offset_x = 0.0;
  double angle_deg = 0.0;
  std::array<double, 4> corner_dy{};
  std::array<double, 4> corner_dx{};

  bool is_identity() const;
};

struct Burst {
  std::vector<GrayFrame> frames;
  double t_amb = 0.0;
  std::optional<Grid2D> true_map;
  std::vector<Motion> motions;

  std::size_t size() const { return frames.size(); }
  std::size_t height() const { return frames.front().levels.height(); }
  std::size_t width() const { return frames.front().levels.width(); }
  // Throws ContractViolation unless frames share dims and t_amb and N >= 1.
  void validate() const;
};

// Temperature map seen through `motion` (bilinear, edge clamped).
Grid2D warp_view(const Grid2D& true_map, const Motion& motion, std::size_t out_height, std::size_t out_width);

// Smallest crop margin (pixels on each side) needed by `cfg`.
double required_margin(const MotionConfig& cfg);

// n frames of one scene under random camera motion; frame 0 is the
// identity (centered) view and true_map holds its ground truth.
Burst synth_burst(const Grid2D& true_map, AmbientTemperature t_amb, std::size_t n, const MotionConfig& motion_cfg,
                  const CameraParams& params);

}  // namespace thermo
