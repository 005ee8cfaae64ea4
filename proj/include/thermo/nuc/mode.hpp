#pragma once

#include <cstddef>
#include <string>

namespace thermo {

enum class NucKind { single, multi };

struct NucMode {
  NucKind kind = NucKind::single;
  // Burst length for multi mode; 1 for single.
  std::size_t frames = 1;

  bool multi() const { return kind == NucKind::multi; }
  static NucMode single() { return {}; }
  static NucMode multiframe(std::size_t n) { return {NucKind::multi, n}; }
  friend bool operator==(const NucMode&, const NucMode&) = default;
};

// "single", "multi" (N = 7) or "multiN". Throws ParameterError otherwise.
NucMode parse_nuc_mode(const std::string& text);
std::string to_string(const NucMode& mode);

}  // namespace thermo
