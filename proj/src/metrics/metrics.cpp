#include "thermo/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "thermo/core/error.hpp"
#include "thermo/metrics/ssim_kernel.hpp"

namespace thermo {

void MetricsConfig::validate() const {
  require(psnr_peak > 0.0, "metrics: peak value must be positive");
  require(ssim_window % 2 == 1 && ssim_window >= 1, "metrics: SSIM window must be odd");
  require(emd_bins >= 2, "metrics: EMD needs at least two bins");
}

namespace {

void check_pair(const Grid2D& a, const Grid2D& b, const char* what) {
  require(!a.empty() && !b.empty(), std::string(what) + ": empty grid");
  require(a.same_shape(b), std::string(what) + ": dimension mismatch");
}

// Valid separable filtering with a symmetric window: out is (h-n+1) x (w-n+1).
void filter_valid(std::span<const double> in, std::size_t h, std::size_t w, const std::vector<double>& g,
                  std::vector<double>& tmp, std::vector<double>& out) {
  const std::size_t n = g.size();
  const std::size_t oh = h - n + 1;
  const std::size_t ow = w - n + 1;
  tmp.assign(h * ow, 0.0);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < ow; ++x) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += g[k] * in[y * w + x + k];
      tmp[y * ow + x] = s;
    }
  out.assign(oh * ow, 0.0);
  for (std::size_t y = 0; y < oh; ++y)
    for (std::size_t x = 0; x < ow; ++x) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += g[k] * tmp[(y + k) * ow + x];
      out[y * ow + x] = s;
    }
}

// Adjoint of filter_valid.
void filter_valid_adjoint(const std::vector<double>& in, std::size_t h, std::size_t w, const std::vector<double>& g,
                          std::vector<double>& tmp, std::vector<double>& out) {
  const std::size_t n = g.size();
  const std::size_t oh = h - n + 1;
  const std::size_t ow = w - n + 1;
  tmp.assign(h * ow, 0.0);
  for (std::size_t y = 0; y < oh; ++y)
    for (std::size_t x = 0; x < ow; ++x)
      for (std::size_t k = 0; k < n; ++k) tmp[(y + k) * ow + x] += g[k] * in[y * ow + x];
  out.assign(h * w, 0.0);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < ow; ++x)
      for (std::size_t k = 0; k < n; ++k) out[y * w + x + k] += g[k] * tmp[y * ow + x];
}

}  // namespace

std::vector<double> gaussian_window(std::size_t size, double sigma) {
  std::vector<double> g(size);
  const double c = (static_cast<double>(size) - 1.0) / 2.0;
  for (std::size_t i = 0; i < size; ++i) {
    const double d = static_cast<double>(i) - c;
    g[i] = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  const double s = std::accumulate(g.begin(), g.end(), 0.0);
  for (double& v : g) v /= s;
  return g;
}

double ssim_valid(std::span<const double> a, std::span<const double> b, std::size_t height, std::size_t width,
                  const SsimParams& params, std::span<double> grad_a) {
  require(height >= params.window && width >= params.window, "ssim: map smaller than the window");
  const std::vector<double> g = gaussian_window(params.window, params.sigma);
  const std::size_t n = height * width;
  std::vector<double> aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  std::vector<double> tmp, mu_a, mu_b, e_aa, e_bb, e_ab;
  filter_valid(a, height, width, g, tmp, mu_a);
  filter_valid(b, height, width, g, tmp, mu_b);
  filter_valid(aa, height, width, g, tmp, e_aa);
  filter_valid(bb, height, width, g, tmp, e_bb);
  filter_valid(ab, height, width, g, tmp, e_ab);

  const double c1 = (params.k1 * params.range) * (params.k1 * params.range);
  const double c2 = (params.k2 * params.range) * (params.k2 * params.range);
  const std::size_t m = mu_a.size();
  const bool want_grad = !grad_a.empty();
  std::vector<double> d_mu, d_aa, d_ab;
  if (want_grad) {
    d_mu.resize(m);
    d_aa.resize(m);
    d_ab.resize(m);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double va = e_aa[i] - ma * ma;
    const double vb = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    const double a1 = 2.0 * ma * mb + c1;
    const double a2 = 2.0 * cov + c2;
    const double b1 = ma * ma + mb * mb + c1;
    const double b2 = va + vb + c2;
    const double s = a1 * a2 / (b1 * b2);
    total += s;
    if (want_grad) {
      const double ds_a1 = a2 / (b1 * b2);
      const double ds_a2 = a1 / (b1 * b2);
      const double ds_b1 = -s / b1;
      const double ds_b2 = -s / b2;
      const double inv = 1.0 / static_cast<double>(m);
      d_mu[i] = inv * (ds_a1 * 2.0 * mb - ds_a2 * 2.0 * mb + ds_b1 * 2.0 * ma - ds_b2 * 2.0 * ma);
      d_aa[i] = inv * ds_b2;
      d_ab[i] = inv * ds_a2 * 2.0;
    }
  }
  if (want_grad) {
    require(grad_a.size() == n, "ssim: gradient buffer has wrong size");
    std::vector<double> g_mu, g_aa, g_ab;
    filter_valid_adjoint(d_mu, height, width, g, tmp, g_mu);
    filter_valid_adjoint(d_aa, height, width, g, tmp, g_aa);
    filter_valid_adjoint(d_ab, height, width, g, tmp, g_ab);
    for (std::size_t i = 0; i < n; ++i) grad_a[i] = g_mu[i] + 2.0 * a[i] * g_aa[i] + b[i] * g_ab[i];
  }
  return total / static_cast<double>(m);
}

double mae(const Grid2D& a, const Grid2D& b) {
  check_pair(a, b, "mae");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(static_cast<double>(a.data()[i]) - b.data()[i]);
  return s / static_cast<double>(a.size());
}

double mse(const Grid2D& a, const Grid2D& b) {
  check_pair(a, b, "mse");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a.data()[i]) - b.data()[i];
    s += d * d;
  }
  return s / static_cast<double>(a.size());
}

double psnr(const Grid2D& a, const Grid2D& b, const MetricsConfig& cfg) {
  cfg.validate();
  const double e = mse(a, b);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(cfg.psnr_peak * cfg.psnr_peak / e);
}

double ssim(const Grid2D& a, const Grid2D& b, const MetricsConfig& cfg) {
  cfg.validate();
  check_pair(a, b, "ssim");
  std::vector<double> av(a.values().begin(), a.values().end());
  std::vector<double> bv(b.values().begin(), b.values().end());
  SsimParams p{cfg.ssim_window, cfg.ssim_sigma, cfg.ssim_k1, cfg.ssim_k2, cfg.psnr_peak};
  return ssim_valid(av, bv, a.height(), a.width(), p);
}

void Histogram::validate() const {
  require(edges.size() == masses.size() + 1 && masses.size() >= 1, "histogram: need B + 1 edges");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) require(edges[i] < edges[i + 1], "histogram: edges must increase");
  double s = 0.0;
  for (double m : masses) {
    require(m >= 0.0, "histogram: negative mass");
    s += m;
  }
  require(std::abs(s - 1.0) <= 1e-9, "histogram: masses must sum to 1");
}

Histogram histogram(std::span<const float> values, double lo, double hi, std::size_t bins) {
  require(!values.empty(), "histogram: no values");
  require(bins >= 1, "histogram: need at least one bin");
  if (!(hi > lo)) hi = lo + 1.0;  // degenerate range: every sample lands in bin 0
  Histogram h;
  h.edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges.back() = hi;
  h.masses.assign(bins, 0.0);
  const double unit = 1.0 / static_cast<double>(values.size());
  for (float v : values) {
    auto idx = static_cast<long>(std::floor((static_cast<double>(v) - lo) / width));
    idx = std::clamp(idx, 0L, static_cast<long>(bins) - 1);
    h.masses[static_cast<std::size_t>(idx)] += unit;
  }
  return h;
}

namespace {

void check_same_bins(const Histogram& a, const Histogram& b) {
  require(a.bins() >= 1 && a.bins() == b.bins() && a.edges == b.edges, "emd: histograms must share bins");
}

}  // namespace

double emd(const Histogram& a, const Histogram& b) {
  check_same_bins(a, b);
  double cdf = 0.0;
  double cost = 0.0;
  for (std::size_t i = 0; i + 1 < a.bins(); ++i) {
    cdf += a.masses[i] - b.masses[i];
    cost += std::abs(cdf) * (a.center(i + 1) - a.center(i));
  }
  return cost;
}

TransportPlan monotone_plan(const Histogram& a, const Histogram& b) {
  check_same_bins(a, b);
  TransportPlan plan{a.bins(), b.bins(), std::vector<double>(a.bins() * b.bins(), 0.0)};
  std::vector<double> supply = a.masses;
  std::vector<double> demand = b.masses;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < plan.rows && j < plan.cols) {
    const double f = std::min(supply[i], demand[j]);
    plan.flow[i * plan.cols + j] += f;
    supply[i] -= f;
    demand[j] -= f;
    if (supply[i] <= demand[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return plan;
}

double plan_cost(const TransportPlan& plan, const Histogram& a, const Histogram& b) {
  double c = 0.0;
  for (std::size_t i = 0; i < plan.rows; ++i)
    for (std::size_t j = 0; j < plan.cols; ++j) c += plan.at(i, j) * std::abs(a.center(i) - b.center(j));
  return c;
}

double emd(const Grid2D& a, const Grid2D& b, const MetricsConfig& cfg) {
  cfg.validate();
  require(!a.empty() && !b.empty(), "emd: empty grid");
  const auto [amin, amax] = std::minmax_element(a.values().begin(), a.values().end());
  const auto [bmin, bmax] = std::minmax_element(b.values().begin(), b.values().end());
  const double lo = std::min(*amin, *bmin);
  const double hi = std::max(*amax, *bmax);
  if (!(hi > lo)) return 0.0;
  return emd(histogram(a.values(), lo, hi, cfg.emd_bins), histogram(b.values(), lo, hi, cfg.emd_bins));
}

double coolest_mean(const Grid2D& map, double fraction, const std::vector<std::uint8_t>* mask) {
  std::vector<float> v;
  v.reserve(map.size());
  if (mask) {
    require(mask->size() == map.size(), "cwsi: mask size does not match the map");
    for (std::size_t i = 0; i < map.size(); ++i)
      if ((*mask)[i]) v.push_back(map.data()[i]);
  } else {
    v.assign(map.values().begin(), map.values().end());
  }
  require(!v.empty(), "cwsi: mask selects no pixels");
  const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(v.size()))));
  std::partial_sort(v.begin(), v.begin() + static_cast<long>(k), v.end());
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += v[i];
  return s / static_cast<double>(k);
}

CwsiInputs cwsi_inputs(const Grid2D& map, double t_amb, const std::vector<std::uint8_t>* mask) {
  return {coolest_mean(map, kPlantFraction, mask), coolest_mean(map, kWetFraction, mask), t_amb + kDryAboveAmbient};
}

double cwsi(const CwsiInputs& in) {
  if (!(in.t_dry > in.t_wet)) {
    throw ContractViolation("cwsi: degenerate denominator (T_dry <= T_wet)");
  }
  return (in.t_plant - in.t_wet) / (in.t_dry - in.t_wet);
}

double cwsi(const Grid2D& map, double t_amb, const std::vector<std::uint8_t>* mask) {
  return cwsi(cwsi_inputs(map, t_amb, mask));
}

double cwsi_error(const Grid2D& gt, const Grid2D& est, double t_amb, const std::vector<std::uint8_t>* mask) {
  return std::abs(cwsi(gt, t_amb, mask) - cwsi(est, t_amb, mask)) * 100.0;
}

FrameMetrics evaluate_frame(const std::string& id, const Grid2D& pred, const Grid2D& gt, double t_amb,
                            const std::vector<std::uint8_t>* mask, const MetricsConfig& cfg) {
  FrameMetrics m;
  m.frame_id = id;
  m.mae = mae(pred, gt);
  m.psnr = psnr(pred, gt, cfg);
  m.ssim = ssim(pred, gt, cfg);
  m.emd = emd(pred, gt, cfg);
  m.cwsi_gt = cwsi(gt, t_amb, mask);
  m.cwsi_est = cwsi(pred, t_amb, mask);
  m.cwsi_err = std::abs(m.cwsi_gt - m.cwsi_est) * 100.0;
  return m;
}

FrameMetrics mean_metrics(const std::vector<FrameMetrics>& rows) {
  FrameMetrics out;
  out.frame_id = "mean";
  if (rows.empty()) return out;
  std::size_t finite_psnr = 0;
  for (const auto& r : rows) {
    out.mae += r.mae;
    out.ssim += r.ssim;
    out.emd += r.emd;
    out.cwsi_gt += r.cwsi_gt;
    out.cwsi_est += r.cwsi_est;
    out.cwsi_err += r.cwsi_err;
    if (std::isfinite(r.psnr)) {
      out.psnr += r.psnr;
      ++finite_psnr;
    }
  }
  const auto n = static_cast<double>(rows.size());
  out.mae /= n;
  out.ssim /= n;
  out.emd /= n;
  out.cwsi_gt /= n;
  out.cwsi_est /= n;
  out.cwsi_err /= n;
  out.psnr = finite_psnr ? out.psnr / static_cast<double>(finite_psnr) : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace thermo
