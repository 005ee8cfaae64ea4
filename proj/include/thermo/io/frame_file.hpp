#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "thermo/core/grid.hpp"

namespace thermo {

enum class FrameKind : std::uint8_t { gray = 0, temperature = 1 };

/// One `TIR1` record: magic, kind byte, H and W (u32 LE), t_amb (f32 LE,
/// NaN when absent), then H*W samples (u16 gray levels or f32 degrees C).
/// A burst file is its frames' records back to back.
struct FrameRecord {
  FrameKind kind = FrameKind::temperature;
  Grid2D grid;
  float t_amb = std::numeric_limits<float>::quiet_NaN();

  bool has_t_amb() const { return !std::isnan(t_amb); }
};

FrameRecord gray_record(const Grid2D& levels, double t_amb);
FrameRecord temperature_record(const Grid2D& map, double t_amb = std::numeric_limits<double>::quiet_NaN());

// Gray samples must be integers in [0, 65535] (FormatError otherwise).
std::string encode_frame(const FrameRecord& record);
// Decodes the record starting at `offset` and advances it.
FrameRecord decode_frame(std::string_view bytes, std::size_t& offset);
std::vector<FrameRecord> decode_frames(std::string_view bytes);

void write_frame_file(const std::filesystem::path& path, const FrameRecord& record);
void write_frame_file(const std::filesystem::path& path, const std::vector<FrameRecord>& records);
FrameRecord read_frame_file(const std::filesystem::path& path);
std::vector<FrameRecord> read_frame_records(const std::filesystem::path& path);

}  // namespace thermo
