#include "thermo/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thermo/core/error.hpp"
#include "thermo/core/resample.hpp"
#include "thermo/sim/random.hpp"

namespace thermo {

SimulatedFrame simulate_frame(const Grid2D& true_map, AmbientTemperature t_amb, const CameraParams& params,
                              std::uint64_t frame_index) {
  params.validate();
  require(true_map.all_finite(), "simulate_frame: temperature map has non-finite values");
  const std::size_t h = true_map.height();
  const std::size_t w = true_map.width();
  const Grid2D gain = gain_map(params, t_amb, h, w);
  const Grid2D offset = offset_map(params, t_amb, h, w);
  const double top = params.max_gray();

  SimulatedFrame out;
  out.frame.t_amb = t_amb.value();
  out.frame.levels = Grid2D(h, w, Unit::graylevel);
  float* dst = out.frame.levels.data();
  for (std::size_t i = 0; i < h * w; ++i) {
    double level = static_cast<double>(gain.data()[i]) * true_map.data()[i] + offset.data()[i];
    if (params.noise_sigma > 0.0) level += params.noise_sigma * keyed_gaussian(params.seed, frame_index, i);
    if (level < 0.0 || level > top) {
      ++out.clamped;
      level = std::clamp(level, 0.0, top);
    }
    dst[i] = static_cast<float>(std::nearbyint(level));
  }
  out.saturated = out.clamped * 100 > h * w;
  return out;
}

Grid2D invert_ideal(const GrayFrame& frame, AmbientTemperature t_amb, const CameraParams& params) {
  const std::size_t h = frame.levels.height();
  const std::size_t w = frame.levels.width();
  const Grid2D gain = gain_map(params, t_amb, h, w);
  const Grid2D offset = offset_map(params, t_amb, h, w);
  Grid2D out(h, w, Unit::celsius);
  for (std::size_t i = 0; i < h * w; ++i) {
    out.data()[i] = static_cast<float>((static_cast<double>(frame.levels.data()[i]) - offset.data()[i]) /
                                       static_cast<double>(gain.data()[i]));
  }
  return out;
}

GrayFrame flat_field_correct(const GrayFrame& frame, const GrayFrame& reference, unsigned gray_depth) {
  require(frame.levels.same_shape(reference.levels), "flat_field_correct: frame and reference differ in size");
  const double ref_mean = mean(reference.levels);
  const double top = std::ldexp(1.0, static_cast<int>(gray_depth)) - 1.0;
  GrayFrame out = frame;
  for (std::size_t i = 0; i < frame.levels.size(); ++i) {
    const double v = static_cast<double>(frame.levels.data()[i]) - (reference.levels.data()[i] - ref_mean);
    out.levels.data()[i] = static_cast<float>(std::clamp(std::nearbyint(v), 0.0, top));
  }
  return out;
}

bool Motion::is_identity() const {
  auto zero = [](const std::array<double, 4>& a) {
    return std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; });
  };
  return offset_y == 0.0 && offset_x == 0.0 && angle_deg == 0.0 && zero(corner_dy) && zero(corner_dx);
}

void Burst::validate() const {
  require(!frames.empty(), "burst: needs at least one frame");
  for (const auto& f : frames) {
    require(f.levels.same_shape(frames.front().levels), "burst: frames differ in size");
    require(f.t_amb == t_amb, "burst: frames must share the ambient temperature");
  }
}

namespace {

// 3x3 homography (row-major, h[8] = 1) mapping src[k] -> dst[k], points as (x, y).
std::array<double, 9> homography(const std::array<std::array<double, 2>, 4>& src,
                                 const std::array<std::array<double, 2>, 4>& dst) {
  double a[8][9] = {};
  for (int k = 0; k < 4; ++k) {
    const double x = src[k][0], y = src[k][1], u = dst[k][0], v = dst[k][1];
    double* r0 = a[2 * k];
    double* r1 = a[2 * k + 1];
    r0[0] = x; r0[1] = y; r0[2] = 1; r0[6] = -u * x; r0[7] = -u * y; r0[8] = u;
    r1[3] = x; r1[4] = y; r1[5] = 1; r1[6] = -v * x; r1[7] = -v * y; r1[8] = v;
  }
  for (int c = 0; c < 8; ++c) {
    int piv = c;
    for (int r = c + 1; r < 8; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    require(std::abs(a[piv][c]) > 1e-12, "homography: degenerate corner configuration");
    if (piv != c)
      for (int j = 0; j < 9; ++j) std::swap(a[c][j], a[piv][j]);
    for (int r = 0; r < 8; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (int j = c; j < 9; ++j) a[r][j] -= f * a[c][j];
    }
  }
  std::array<double, 9> hm{};
  for (int i = 0; i < 8; ++i) hm[i] = a[i][8] / a[i][i];
  hm[8] = 1.0;
  return hm;
}

}  // namespace

Grid2D warp_view(const Grid2D& true_map, const Motion& motion, std::size_t out_height, std::size_t out_width) {
  require(out_height <= true_map.height() && out_width <= true_map.width(), "warp_view: view larger than map");
  const double top = static_cast<double>((true_map.height() - out_height) / 2);
  const double left = static_cast<double>((true_map.width() - out_width) / 2);
  const double ymax = static_cast<double>(out_height - 1);
  const double xmax = static_cast<double>(out_width - 1);
  const std::array<std::array<double, 2>, 4> rect{{{0, 0}, {xmax, 0}, {xmax, ymax}, {0, ymax}}};
  std::array<std::array<double, 2>, 4> quad = rect;
  bool has_perspective = false;
  for (int k = 0; k < 4; ++k) {
    quad[k][0] += motion.corner_dx[k];
    quad[k][1] += motion.corner_dy[k];
    has_perspective = has_perspective || motion.corner_dx[k] != 0.0 || motion.corner_dy[k] != 0.0;
  }
  const std::array<double, 9> hm = has_perspective ? homography(rect, quad)
                                                   : std::array<double, 9>{1, 0, 0, 0, 1, 0, 0, 0, 1};
  const double theta = motion.angle_deg * std::numbers::pi / 180.0;
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const double cy = ymax / 2.0;
  const double cx = xmax / 2.0;

  Grid2D out(out_height, out_width, true_map.unit());
  for (std::size_t y = 0; y < out_height; ++y) {
    for (std::size_t x = 0; x < out_width; ++x) {
      double px = static_cast<double>(x);
      double py = static_cast<double>(y);
      if (has_perspective) {
        const double den = hm[6] * px + hm[7] * py + hm[8];
        const double qx = (hm[0] * px + hm[1] * py + hm[2]) / den;
        const double qy = (hm[3] * px + hm[4] * py + hm[5]) / den;
        px = qx;
        py = qy;
      }
      if (theta != 0.0) {
        const double dx = px - cx;
        const double dy = py - cy;
        px = cx + ct * dx - st * dy;
        py = cy + st * dx + ct * dy;
      }
      out(y, x) = bilinear_sample(true_map, py + top + motion.offset_y, px + left + motion.offset_x);
    }
  }
  return out;
}

double required_margin(const MotionConfig& cfg) {
  const double half_diag = 0.5 * std::hypot(static_cast<double>(cfg.out_height), static_cast<double>(cfg.out_width));
  const double theta = std::abs(cfg.max_deg) * std::numbers::pi / 180.0;
  return cfg.max_shift + cfg.max_px + 2.0 * half_diag * std::sin(theta / 2.0);
}

Burst synth_burst(const Grid2D& true_map, AmbientTemperature t_amb, std::size_t n, const MotionConfig& motion_cfg,
                  const CameraParams& params) {
  require(n >= 1, "synth_burst: n must be >= 1");
  const std::size_t h = motion_cfg.out_height;
  const std::size_t w = motion_cfg.out_width;
  require(h >= 1 && w >= 1, "synth_burst: output dims must be set");
  require(true_map.height() > h && true_map.width() > w,
          "synth_burst: map must be strictly larger than the output frame");
  const double avail = static_cast<double>(std::min({(true_map.height() - h) / 2, (true_map.height() - h + 1) / 2,
                                                     (true_map.width() - w) / 2, (true_map.width() - w + 1) / 2}));
  if (required_margin(motion_cfg) > avail) {
    throw ContractViolation("synth_burst: crop margin " + std::to_string(avail) + " px too small for motion needing " +
                            std::to_string(required_margin(motion_cfg)) + " px");
  }

  Burst burst;
  burst.t_amb = t_amb.value();
  Rng rng(hash_key(motion_cfg.seed, 0x6d6f74696f6eULL));
  for (std::size_t k = 0; k < n; ++k) {
    Motion m;
    if (k > 0) {
      const double s = motion_cfg.max_shift;
      if (motion_cfg.subpixel_shift) {
        m.offset_y = rng.uniform(-s, s);
        m.offset_x = rng.uniform(-s, s);
      } else {
        const auto si = static_cast<long>(std::floor(s));
        m.offset_y = static_cast<double>(rng.integer(-si, si));
        m.offset_x = static_cast<double>(rng.integer(-si, si));
      }
      if (motion_cfg.max_deg > 0.0) m.angle_deg = rng.uniform(-motion_cfg.max_deg, motion_cfg.max_deg);
      if (motion_cfg.max_px > 0.0) {
        for (int c = 0; c < 4; ++c) {
          m.corner_dy[c] = rng.uniform(-motion_cfg.max_px, motion_cfg.max_px);
          m.corner_dx[c] = rng.uniform(-motion_cfg.max_px, motion_cfg.max_px);
        }
      }
    }
    const Grid2D view = warp_view(true_map, m, h, w);
    if (k == 0) burst.true_map = view;
    burst.frames.push_back(simulate_frame(view, t_amb, params, k).frame);
    burst.motions.push_back(m);
  }
  return burst;
}

}  // namespace thermo
