#pragma once

#include "thermo/nuc/mode.hpp"
#include "thermo/nuc/multi.hpp"
#include "thermo/nuc/single.hpp"

namespace thermo {

/// Whichever NUC network a weight store holds.
struct NucNet {
  NucMode mode;
  SingleNucConfig single;
  MultiNucConfig multi;

  // LoadError unless exactly one NUC network is present and well formed.
  static NucNet from_weights(const WeightStore& weights);
};

}  // namespace thermo
