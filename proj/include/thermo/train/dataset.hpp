#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thermo/core/grid.hpp"
#include "thermo/nuc/mode.hpp"
#include "thermo/sim/camera.hpp"
#include "thermo/sim/simulator.hpp"

namespace thermo {

/// One ground-truth scene.
struct Sample {
  std::string id;
  Grid2D gt;
  double t_amb = 0.0;
};

/// Network input (a frame or a burst) with its supervision targets.
struct TrainingPair {
  std::string id;
  double t_amb = 0.0;
  std::optional<GrayFrame> frame;
  std::optional<Burst> burst;
  // Ground truth on the input grid (NUC pretraining target).
  Grid2D lr_target;
  // Ground truth on the output grid.
  Grid2D target;
};

struct BurstMotion {
  // Crop margin of the low-resolution map, pixels on each side.
  std::size_t margin = 4;
  double max_deg = 0.5;
  double max_px = 0.5;
  bool subpixel_shift = true;
};

// Single frame: input = simulate_frame(downscale_gt(gt, s)), target = gt.
TrainingPair make_training_pair(const Grid2D& gt, std::size_t s, AmbientTemperature t_amb,
                                const CameraParams& params);

// Burst of n frames seen through random motion of the downscaled map; the
// target is gt without its s * margin border.
TrainingPair make_training_pair(const Grid2D& gt, std::size_t s, AmbientTemperature t_amb, const CameraParams& params,
                                std::size_t n, const BurstMotion& motion);

struct DatasetConfig {
  std::size_t scale = 2;
  NucMode mode;
  BurstMotion motion;
  double val_fraction = 0.2;
  std::uint64_t seed = 0;
};

struct Dataset {
  std::vector<TrainingPair> train;
  std::vector<TrainingPair> val;
};

// Indices of the validation sources: a seeded, disjoint val_fraction of the scenes.
std::vector<std::size_t> validation_indices(std::size_t count, double val_fraction, std::uint64_t seed);

// Simulates every scene under `camera`, with a per-scene noise seed.
Dataset build_dataset(const std::vector<Sample>& scenes, const DatasetConfig& cfg, const CameraParams& camera);

}  // namespace thermo
