#pragma once

#include <cstddef>
#include <vector>

#include "thermo/core/grid.hpp"
#include "thermo/sim/simulator.hpp"

namespace thermo {

struct Shift {
  int dy = 0;
  int dx = 0;
  friend bool operator==(const Shift&, const Shift&) = default;
};

/// Integer shift of every burst frame relative to frame 0.
///
/// Frame k satisfies frame_k[y][x] ~ frame_0[y + dy][x + dx].
struct RegistrationResult {
  std::vector<Shift> shifts;
  // Peak normalized cross-correlation per frame (1 for the reference).
  std::vector<double> frame_confidence;
  // Lowest peak over the non-reference frames; 0 flags a degenerate burst.
  double confidence = 0.0;
};

inline constexpr std::size_t kDefaultSearchRadius = 4;

// Exhaustive integer search within +-search_radius. Frames are high-passed
// (local 5x5 mean removed) so smooth fixed-pattern offsets do not pull the
// peak toward zero shift. Requires N >= 2.
RegistrationResult register_burst(const Burst& burst, std::size_t search_radius = kDefaultSearchRadius);

// aligned[y][x] = frame[y - dy][x - dx] with edge clamping; maps frame k
// onto the reference grid.
Grid2D align_to_reference(const Grid2D& frame, Shift shift);

}  // namespace thermo
