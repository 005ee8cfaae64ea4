#include "thermo/pipeline/pipeline.hpp"

#include "thermo/core/error.hpp"
#include "thermo/core/resample.hpp"

namespace thermo {

Pipeline::Pipeline(WeightStore nuc, WeightStore sr, std::size_t scale, MultiNucOptions options)
    : nuc_(std::move(nuc)), sr_(std::move(sr)), scale_(scale), options_(options) {
  net_ = NucNet::from_weights(nuc_);
  const SrConfig cfg = sr_config(sr_);
  if (cfg.scale != scale) {
    throw LoadError("pipeline: SR weights are for scale " + std::to_string(cfg.scale) + ", requested " +
                    std::to_string(scale));
  }
}

Pipeline::Pipeline(const WeightStore& combined, std::size_t scale, MultiNucOptions options)
    : Pipeline(combined.with_prefix("nuc."), combined.with_prefix("sr."), scale, options) {}

Grid2D Pipeline::nuc(const std::vector<GrayFrame>& frames, double t_amb) const {
  if (frames.size() != this->frames()) {
    throw ContractViolation("pipeline: " + to_string(net_.mode) + " NUC takes " + std::to_string(this->frames()) +
                            " frame(s), got " + std::to_string(frames.size()));
  }
  if (!net_.mode.multi()) return nuc_single(frames.front(), t_amb, nuc_);
  Burst burst;
  burst.frames = frames;
  for (auto& f : burst.frames) f.t_amb = t_amb;
  burst.t_amb = t_amb;
  return nuc_multi(burst, t_amb, nuc_, options_);
}

Grid2D Pipeline::sr(const Grid2D& t_map) const { return sr_forward(t_map, sr_, scale_); }

PipelineOutput Pipeline::run(const std::vector<GrayFrame>& frames, double t_amb) const {
  PipelineOutput out;
  out.nuc = nuc(frames, t_amb);
  out.sr = sr(out.nuc);
  return out;
}

Grid2D identity_inversion_baseline(const GrayFrame& frame, std::size_t s) {
  const Grid2D t = invert_ideal(frame, AmbientTemperature(frame.t_amb), CameraParams::identity());
  return bicubic_resample(t, Ratio::up(s));
}

}  // namespace thermo
