#include "thermo/train/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "thermo/core/error.hpp"
#include "thermo/core/resample.hpp"
#include "thermo/sim/random.hpp"

namespace thermo {

NucMode parse_nuc_mode(const std::string& text) {
  if (text == "single") return NucMode::single();
  if (text == "multi") return NucMode::multiframe(7);
  if (text.rfind("multi", 0) == 0 && text.size() > 5) {
    const std::string digits = text.substr(5);
    if (std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
        digits.size() <= 3) {
      const std::size_t n = std::stoul(digits);
      if (n >= 1) return NucMode::multiframe(n);
    }
  }
  throw ParameterError("unknown nuc mode '" + text + "' (expected single, multi or multiN)");
}

std::string to_string(const NucMode& mode) {
  return mode.multi() ? "multi" + std::to_string(mode.frames) : "single";
}

TrainingPair make_training_pair(const Grid2D& gt, std::size_t s, AmbientTemperature t_amb,
                                const CameraParams& params) {
  TrainingPair pair;
  pair.t_amb = t_amb.value();
  pair.lr_target = downscale_gt(gt, s);
  pair.frame = simulate_frame(pair.lr_target, t_amb, params).frame;
  pair.target = gt;
  return pair;
}

TrainingPair make_training_pair(const Grid2D& gt, std::size_t s, AmbientTemperature t_amb, const CameraParams& params,
                                std::size_t n, const BurstMotion& motion) {
  const Grid2D lr = downscale_gt(gt, s);
  require(lr.height() > 2 * motion.margin && lr.width() > 2 * motion.margin,
          "make_training_pair: scene too small for the burst margin");
  MotionConfig mc;
  mc.out_height = lr.height() - 2 * motion.margin;
  mc.out_width = lr.width() - 2 * motion.margin;
  mc.max_deg = motion.max_deg;
  mc.max_px = motion.max_px;
  mc.subpixel_shift = motion.subpixel_shift;
  mc.seed = hash_key(params.seed, 0x42525354ULL);
  // Spend whatever margin rotation and jitter leave on translation.
  MotionConfig still = mc;
  still.max_shift = 0.0;
  mc.max_shift = std::floor(static_cast<double>(motion.margin) - required_margin(still));
  require(mc.max_shift >= 0.0, "make_training_pair: burst margin too small for rotation and jitter");

  TrainingPair pair;
  pair.t_amb = t_amb.value();
  pair.burst = synth_burst(lr, t_amb, n, mc, params);
  pair.lr_target = *pair.burst->true_map;
  pair.target = crop(gt, s * motion.margin, s * motion.margin, s * mc.out_height, s * mc.out_width);
  return pair;
}

std::vector<std::size_t> validation_indices(std::size_t count, double val_fraction, std::uint64_t seed) {
  require(val_fraction >= 0.0 && val_fraction < 1.0, "dataset: validation fraction must be in [0, 1)");
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(hash_key(seed, 0x56414cULL));
  for (std::size_t i = count; i > 1; --i) std::swap(idx[i - 1], idx[rng.integer(0, i - 1)]);
  const auto n_val = static_cast<std::size_t>(std::round(val_fraction * static_cast<double>(count)));
  idx.resize(std::min(n_val, count));
  std::sort(idx.begin(), idx.end());
  return idx;
}

Dataset build_dataset(const std::vector<Sample>& scenes, const DatasetConfig& cfg, const CameraParams& camera) {
  const std::vector<std::size_t> val = validation_indices(scenes.size(), cfg.val_fraction, cfg.seed);
  Dataset out;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    CameraParams cam = camera;
    cam.seed = hash_key(camera.seed, cfg.seed, i);
    const AmbientTemperature t_amb(scenes[i].t_amb);
    TrainingPair pair = cfg.mode.multi()
                            ? make_training_pair(scenes[i].gt, cfg.scale, t_amb, cam, cfg.mode.frames, cfg.motion)
                            : make_training_pair(scenes[i].gt, cfg.scale, t_amb, cam);
    pair.id = scenes[i].id;
    const bool is_val = std::binary_search(val.begin(), val.end(), i);
    (is_val ? out.val : out.train).push_back(std::move(pair));
  }
  return out;
}

}  // namespace thermo
