#include "thermo/sim/camera.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "thermo/core/error.hpp"

namespace thermo {

AmbientTemperature::AmbientTemperature(double celsius) : value_(celsius) {
  if (!(celsius >= kAmbientMin && celsius <= kAmbientMax)) {
    throw ContractViolation("ambient temperature " + std::to_string(celsius) + " outside operating envelope");
  }
}

double eval_poly(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double CameraParams::gain_at(double t_amb) const { return eval_poly(gain_poly, t_amb); }
double CameraParams::offset_at(double t_amb) const { return eval_poly(offset_poly, t_amb); }
double CameraParams::radial_at(double r) const { return eval_poly(radial_profile, r); }
double CameraParams::max_gray() const { return std::ldexp(1.0, static_cast<int>(gray_depth)) - 1.0; }

void CameraParams::validate() const {
  auto check_poly = [](const std::vector<double>& p, const char* name) {
    if (p.empty() || p.size() > 4) throw ParameterError(std::string(name) + ": need 1..4 coefficients");
    for (double c : p)
      if (!std::isfinite(c)) throw ParameterError(std::string(name) + ": non-finite coefficient");
  };
  check_poly(gain_poly, "gain_poly");
  check_poly(offset_poly, "offset_poly");
  if (radial_profile.empty()) throw ParameterError("radial_profile: need at least one coefficient");
  for (double c : radial_profile)
    if (!std::isfinite(c)) throw ParameterError("radial_profile: non-finite coefficient");
  if (std::abs(radial_profile.front() - 1.0) > 1e-12) throw ParameterError("radial_profile: p(0) must equal 1");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw ParameterError("noise_sigma must be >= 0");
  if (gray_depth < 1 || gray_depth > 16) throw ParameterError("gray_depth must be in 1..16");
  // Gain must be positive over the calibrated ambient range and every radius.
  for (int i = 0; i <= 140; ++i) {
    const double t = -10.0 + 0.5 * i;
    if (!(gain_at(t) > 0.0)) throw ParameterError("gain_poly is not positive at T_amb = " + std::to_string(t));
  }
  for (int i = 0; i <= 100; ++i) {
    const double r = std::sqrt(2.0) * i / 100.0;
    if (!(radial_at(r) > 0.0)) throw ParameterError("radial_profile is not positive at r = " + std::to_string(r));
  }
}

double normalized_radius(std::size_t y, std::size_t x, std::size_t height, std::size_t width) {
  auto axis = [](std::size_t i, std::size_t n) {
    if (n <= 1) return 0.0;
    const double half = (static_cast<double>(n) - 1.0) / 2.0;
    return (static_cast<double>(i) - half) / half;
  };
  const double u = axis(y, height);
  const double v = axis(x, width);
  return std::sqrt(u * u + v * v);
}

namespace {

Grid2D modulated_map(const CameraParams& params, double level, std::size_t height, std::size_t width) {
  Grid2D out(height, width, Unit::dimensionless);
  for (std::size_t y = 0; y < height; ++y)
    for (std::size_t x = 0; x < width; ++x)
      out(y, x) = static_cast<float>(level * params.radial_at(normalized_radius(y, x, height, width)));
  return out;
}

}  // namespace

Grid2D gain_map(const CameraParams& params, AmbientTemperature t_amb, std::size_t height, std::size_t width) {
  const double g = params.gain_at(t_amb.value());
  if (!(g > 0.0)) throw ParameterError("gain is not positive at T_amb = " + std::to_string(t_amb.value()));
  Grid2D out = modulated_map(params, g, height, width);
  for (float v : out.values())
    if (!(v > 0.0F)) throw ParameterError("gain map is not strictly positive");
  return out;
}

Grid2D offset_map(const CameraParams& params, AmbientTemperature t_amb, std::size_t height, std::size_t width) {
  return modulated_map(params, params.offset_at(t_amb.value()), height, width).retagged(Unit::graylevel);
}

namespace {

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  return os.str();
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& value, int line) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || item.empty()) {
      throw FormatError("camera params line " + std::to_string(line) + ": bad number '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

template <typename Int>
Int parse_integer(const std::string& value, int line) {
  const std::string s = trim(value);
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw FormatError("camera params line " + std::to_string(line) + ": bad integer '" + s + "'");
  }
  return v;
}

}  // namespace

std::string format_camera_params(const CameraParams& params) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "gain_poly = " << join(params.gain_poly) << '\n';
  os << "offset_poly = " << join(params.offset_poly) << '\n';
  os << "radial_profile = " << join(params.radial_profile) << '\n';
  os << "noise_sigma = " << params.noise_sigma << '\n';
  os << "seed = " << params.seed << '\n';
  os << "gray_depth = " << params.gray_depth << '\n';
  return os.str();
}

CameraParams parse_camera_params(const std::string& text) {
  CameraParams p;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) throw FormatError("camera params line " + std::to_string(line) + ": missing '='");
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = raw.substr(eq + 1);
    if (key == "gain_poly") {
      p.gain_poly = parse_numbers(value, line);
    } else if (key == "offset_poly") {
      p.offset_poly = parse_numbers(value, line);
    } else if (key == "radial_profile") {
      p.radial_profile = parse_numbers(value, line);
    } else if (key == "noise_sigma") {
      auto v = parse_numbers(value, line);
      if (v.size() != 1) throw FormatError("noise_sigma takes one value");
      p.noise_sigma = v[0];
    } else if (key == "seed") {
      p.seed = parse_integer<std::uint64_t>(value, line);
    } else if (key == "gray_depth") {
      p.gray_depth = parse_integer<unsigned>(value, line);
    } else {
      throw FormatError("camera params line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  p.validate();
  return p;
}

CameraParams load_camera_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open camera params " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_camera_params(ss.str());
}

void save_camera_params(const CameraParams& params, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write camera params " + path.string());
  out << format_camera_params(params);
}

}  // namespace thermo
