#include "thermo/nuc/registration.hpp"

#include <algorithm>
#include <cmath>

#include "thermo/core/error.hpp"
#include "thermo/core/parallel.hpp"

namespace thermo {
namespace {

constexpr int kHighPassRadius = 2;

// Frame minus its 5x5 box mean, over the interior where the box fits (so a
// quadratic fixed pattern cancels exactly).
std::vector<double> high_pass(const Grid2D& g) {
  const int h = static_cast<int>(g.height());
  const int w = static_cast<int>(g.width());
  const int r = kHighPassRadius;
  const int oh = h - 2 * r;
  const int ow = w - 2 * r;
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  const double n = (2 * r + 1) * (2 * r + 1);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int dy = 0; dy <= 2 * r; ++dy)
        for (int dx = 0; dx <= 2 * r; ++dx) s += g(y + dy, x + dx);
      out[static_cast<std::size_t>(y) * ow + x] = g(y + r, x + r) - s / n;
    }
  }
  return out;
}

bool is_constant(const Grid2D& g) {
  const auto v = g.values();
  return std::all_of(v.begin(), v.end(), [&](float a) { return a == v[0]; });
}

// Pearson correlation between ref[y + dy][x + dx] and mov[y][x] over the overlap.
double ncc(const std::vector<double>& ref, const std::vector<double>& mov, int h, int w, int dy, int dx) {
  const int y0 = std::max(0, -dy);
  const int y1 = std::min(h, h - dy);
  const int x0 = std::max(0, -dx);
  const int x1 = std::min(w, w - dx);
  if (y1 - y0 < 2 || x1 - x0 < 2) return 0.0;
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int y = y0; y < y1; ++y) {
    const double* a = ref.data() + static_cast<std::size_t>(y + dy) * w + dx;
    const double* b = mov.data() + static_cast<std::size_t>(y) * w;
    for (int x = x0; x < x1; ++x) {
      sa += a[x];
      sb += b[x];
      saa += a[x] * a[x];
      sbb += b[x] * b[x];
      sab += a[x] * b[x];
    }
  }
  const double n = static_cast<double>(y1 - y0) * (x1 - x0);
  const double va = saa - sa * sa / n;
  const double vb = sbb - sb * sb / n;
  if (va <= 1e-12 * n || vb <= 1e-12 * n) return 0.0;
  return (sab - sa * sb / n) / std::sqrt(va * vb);
}

}  // namespace

RegistrationResult register_burst(const Burst& burst, std::size_t search_radius) {
  burst.validate();
  require(burst.size() >= 2, "register_burst: need at least 2 frames");
  require(burst.height() > 2 * kHighPassRadius + 1 && burst.width() > 2 * kHighPassRadius + 1,
          "register_burst: frames too small");
  const int h = static_cast<int>(burst.height()) - 2 * kHighPassRadius;
  const int w = static_cast<int>(burst.width()) - 2 * kHighPassRadius;
  const int r = static_cast<int>(std::min<std::size_t>(search_radius, static_cast<std::size_t>(std::min(h, w) / 2)));

  RegistrationResult res;
  res.shifts.assign(burst.size(), Shift{});
  res.frame_confidence.assign(burst.size(), 0.0);
  const bool ref_flat = is_constant(burst.frames[0].levels);
  res.frame_confidence[0] = ref_flat ? 0.0 : 1.0;
  const std::vector<double> ref = high_pass(burst.frames[0].levels);

  parallel_for(burst.size() - 1, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const std::size_t k = i + 1;
      if (ref_flat || is_constant(burst.frames[k].levels)) continue;
      const std::vector<double> mov = high_pass(burst.frames[k].levels);
      Shift best{};
      double best_score = ncc(ref, mov, h, w, 0, 0);
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const double s = ncc(ref, mov, h, w, dy, dx);
          if (s > best_score + 1e-12) {
            best_score = s;
            best = {dy, dx};
          }
        }
      }
      res.shifts[k] = best;
      res.frame_confidence[k] = std::max(0.0, best_score);
    }
  });
  res.confidence = *std::min_element(res.frame_confidence.begin() + 1, res.frame_confidence.end());
  return res;
}

Grid2D align_to_reference(const Grid2D& frame, Shift shift) {
  if (shift == Shift{}) return frame;
  const int h = static_cast<int>(frame.height());
  const int w = static_cast<int>(frame.width());
  Grid2D out(frame.height(), frame.width(), frame.unit());
  for (int y = 0; y < h; ++y) {
    const int sy = std::clamp(y - shift.dy, 0, h - 1);
    for (int x = 0; x < w; ++x) out(y, x) = frame(sy, std::clamp(x - shift.dx, 0, w - 1));
  }
  return out;
}

}  // namespace thermo
