#pragma once

#include <cstddef>
#include <vector>

#include "thermo/nn/weight_store.hpp"
#include "thermo/nuc/nuc_net.hpp"
#include "thermo/sim/simulator.hpp"
#include "thermo/sr/sr_net.hpp"

namespace thermo {

struct PipelineOutput {
  Grid2D nuc;
  Grid2D sr;
};

/// NUC followed by SR with fixed weights.
class Pipeline {
 public:
  // LoadError when the weights are malformed or built for another scale.
  Pipeline(WeightStore nuc, WeightStore sr, std::size_t scale, MultiNucOptions options = {});
  // Both networks in one store ("nuc." and "sr." records).
  Pipeline(const WeightStore& combined, std::size_t scale, MultiNucOptions options = {});

  const NucMode& mode() const { return net_.mode; }
  std::size_t scale() const { return scale_; }
  // Frames per call: 1 for single mode, N for multi.
  std::size_t frames() const { return net_.mode.multi() ? net_.multi.frames : 1; }

  Grid2D nuc(const std::vector<GrayFrame>& frames, double t_amb) const;
  Grid2D sr(const Grid2D& t_map) const;
  PipelineOutput run(const std::vector<GrayFrame>& frames, double t_amb) const;

 private:
  WeightStore nuc_;
  WeightStore sr_;
  std::size_t scale_;
  MultiNucOptions options_;
  NucNet net_;
};

// Analytic inversion assuming an identity camera (gray level read as degrees C),
// then bicubic upscaling.
Grid2D identity_inversion_baseline(const GrayFrame& frame, std::size_t s);

}  // namespace thermo
