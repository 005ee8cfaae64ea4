#include "thermo/nuc/nuc_net.hpp"

#include "thermo/core/error.hpp"

namespace thermo {

NucNet NucNet::from_weights(const WeightStore& weights) {
  const bool has_single = weights.contains("nuc.single.cfg");
  const bool has_multi = weights.contains("nuc.multi.cfg");
  if (has_single == has_multi) throw LoadError("weights: expected exactly one NUC network (single or multi)");
  NucNet net;
  if (has_single) {
    net.single = single_nuc_config(weights);
  } else {
    net.multi = multi_nuc_config(weights);
    net.mode = NucMode::multiframe(net.multi.frames);
  }
  return net;
}

}  // namespace thermo
