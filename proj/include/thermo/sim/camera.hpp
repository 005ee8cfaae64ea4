#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "thermo/core/grid.hpp"

namespace thermo {

// Camera operating envelope for the ambient temperature (degrees C).
inline constexpr double kAmbientMin = -20.0;
inline constexpr double kAmbientMax = 70.0;

class AmbientTemperature {
 public:
  explicit AmbientTemperature(double celsius);
  double value() const { return value_; }

 private:
  double value_;
};

/// Parametric uncooled-camera response L = G(T_amb, r) * T + D(T_amb, r) + noise.
///
/// G and D are cubic (or lower) polynomials in the ambient temperature,
/// both modulated by one radial profile p(r), p(0) = 1, where r is the
/// pixel-center distance from the frame center in half-extent units
/// (r = sqrt(2) at the corners of any frame).
struct CameraParams {
  std::vector<double> gain_poly{1.0};
  std::vector<double> offset_poly{0.0};
  std::vector<double> radial_profile{1.0};
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  unsigned gray_depth = 14;

  // Throws ParameterError when the invariants do not hold.
  void validate() const;
  double gain_at(double t_amb) const;
  double offset_at(double t_amb) const;
  double radial_at(double r) const;
  double max_gray() const;

  static CameraParams identity() { return {}; }

  friend bool operator==(const CameraParams&, const CameraParams&) = default;
};

double eval_poly(const std::vector<double>& coeffs, double x);

// Normalized radius of pixel (y, x).
double normalized_radius(std::size_t y, std::size_t x, std::size_t height, std::size_t width);

Grid2D gain_map(const CameraParams& params, AmbientTemperature t_amb, std::size_t height, std::size_t width);
Grid2D offset_map(const CameraParams& params, AmbientTemperature t_amb, std::size_t height, std::size_t width);

// `key = number[,number...]` text form.
std::string format_camera_params(const CameraParams& params);
CameraParams parse_camera_params(const std::string& text);
CameraParams load_camera_params(const std::filesystem::path& path);
void save_camera_params(const CameraParams& params, const std::filesystem::path& path);

}  // namespace thermo
