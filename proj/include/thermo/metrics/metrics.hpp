#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thermo/core/grid.hpp"

namespace thermo {

struct MetricsConfig {
  // Peak value X of the temperature maps (PSNR numerator, SSIM range).
  double psnr_peak = 90.0;
  std::size_t ssim_window = 11;
  double ssim_sigma = 1.5;
  double ssim_k1 = 0.01;
  double ssim_k2 = 0.03;
  std::size_t emd_bins = 256;

  void validate() const;
};

double mae(const Grid2D& a, const Grid2D& b);
double mse(const Grid2D& a, const Grid2D& b);
// +infinity when the maps are identical.
double psnr(const Grid2D& a, const Grid2D& b, const MetricsConfig& cfg = {});
double ssim(const Grid2D& a, const Grid2D& b, const MetricsConfig& cfg = {});

struct Histogram {
  std::vector<double> edges;   // B + 1, uniform, increasing
  std::vector<double> masses;  // B, sums to 1

  std::size_t bins() const { return masses.size(); }
  double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
  void validate() const;
};

// Uniform-bin histogram of `values` over [lo, hi]; the top edge is inclusive.
Histogram histogram(std::span<const float> values, double lo, double hi, std::size_t bins);

struct TransportPlan {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> flow;  // rows x cols

  double at(std::size_t i, std::size_t j) const { return flow[i * cols + j]; }
};

// Exact 1-D earth mover's distance between histograms on the same bins,
// |center_i - center_j| ground cost, via the CDF-difference formula.
double emd(const Histogram& a, const Histogram& b);
// Optimal (monotone) plan for the same problem and its cost.
TransportPlan monotone_plan(const Histogram& a, const Histogram& b);
double plan_cost(const TransportPlan& plan, const Histogram& a, const Histogram& b);

// Histograms over the joint min/max of both maps, then emd().
double emd(const Grid2D& a, const Grid2D& b, const MetricsConfig& cfg = {});

struct CwsiInputs {
  double t_plant = 0.0;
  double t_wet = 0.0;
  double t_dry = 0.0;
};

inline constexpr double kPlantFraction = 0.33;
inline constexpr double kWetFraction = 0.05;
inline constexpr double kDryAboveAmbient = 7.0;

// Mean of the coolest `fraction` of the selected pixels (at least one pixel).
double coolest_mean(const Grid2D& map, double fraction, const std::vector<std::uint8_t>* mask = nullptr);

CwsiInputs cwsi_inputs(const Grid2D& map, double t_amb, const std::vector<std::uint8_t>* mask = nullptr);
// (T_plant - T_wet) / (T_dry - T_wet), unclamped.
double cwsi(const CwsiInputs& in);
double cwsi(const Grid2D& map, double t_amb, const std::vector<std::uint8_t>* mask = nullptr);
// |cwsi(gt) - cwsi(est)| * 100.
double cwsi_error(const Grid2D& gt, const Grid2D& est, double t_amb, const std::vector<std::uint8_t>* mask = nullptr);

struct FrameMetrics {
  std::string frame_id;
  double mae = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;
  double emd = 0.0;
  double cwsi_gt = 0.0;
  double cwsi_est = 0.0;
  double cwsi_err = 0.0;
};

FrameMetrics evaluate_frame(const std::string& id, const Grid2D& pred, const Grid2D& gt, double t_amb,
                            const std::vector<std::uint8_t>* mask, const MetricsConfig& cfg = {});
// Column means; psnr mean over finite values only (inf if none finite).
FrameMetrics mean_metrics(const std::vector<FrameMetrics>& rows);

}  // namespace thermo
