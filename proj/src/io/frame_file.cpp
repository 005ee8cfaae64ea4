#include "thermo/io/frame_file.hpp"

#include <cmath>

#include "thermo/core/error.hpp"
#include "thermo/io/atomic_write.hpp"
#include "thermo/io/binary.hpp"

namespace thermo {
namespace {

constexpr std::string_view kMagic = "TIR1";

}  // namespace

FrameRecord gray_record(const Grid2D& levels, double t_amb) {
  return {FrameKind::gray, levels.retagged(Unit::graylevel), static_cast<float>(t_amb)};
}

FrameRecord temperature_record(const Grid2D& map, double t_amb) {
  return {FrameKind::temperature, map.retagged(Unit::celsius), static_cast<float>(t_amb)};
}

std::string encode_frame(const FrameRecord& r) {
  const std::size_t n = r.grid.size();
  std::string out;
  out.reserve(17 + n * 4);
  out.append(kMagic);
  out.push_back(static_cast<char>(r.kind));
  binary::put_u32(out, static_cast<std::uint32_t>(r.grid.height()));
  binary::put_u32(out, static_cast<std::uint32_t>(r.grid.width()));
  binary::put_f32(out, r.t_amb);
  if (r.kind == FrameKind::gray) {
    for (float v : r.grid.values()) {
      if (!(v >= 0.0F && v <= 65535.0F) || std::nearbyint(v) != v)
        throw FormatError("frame file: gray level " + std::to_string(v) + " is not a 16-bit integer");
      binary::put_u16(out, static_cast<std::uint16_t>(v));
    }
  } else {
    for (float v : r.grid.values()) binary::put_f32(out, v);
  }
  return out;
}

FrameRecord decode_frame(std::string_view bytes, std::size_t& offset) {
  binary::Reader in(bytes, offset, "frame file");
  if (in.take(4) != kMagic) throw FormatError("frame file: bad magic (expected TIR1)");
  const std::uint8_t kind = in.u8();
  if (kind > 1) throw FormatError("frame file: unknown sample kind " + std::to_string(kind));
  FrameRecord r;
  r.kind = static_cast<FrameKind>(kind);
  const std::uint32_t h = in.u32();
  const std::uint32_t w = in.u32();
  r.t_amb = in.f32();
  if (h == 0 || w == 0) throw FormatError("frame file: empty frame");
  const std::uint64_t n = static_cast<std::uint64_t>(h) * w;
  const std::size_t sample = r.kind == FrameKind::gray ? 2 : 4;
  if (n > in.remaining() / sample) throw FormatError("frame file: payload shorter than H*W samples");
  std::vector<float> values(n);
  if (r.kind == FrameKind::gray) {
    for (auto& v : values) v = in.u16();
  } else {
    for (auto& v : values) v = in.f32();
  }
  r.grid = Grid2D(h, w, std::move(values), r.kind == FrameKind::gray ? Unit::graylevel : Unit::celsius);
  offset = in.position();
  return r;
}

std::vector<FrameRecord> decode_frames(std::string_view bytes) {
  std::vector<FrameRecord> out;
  std::size_t offset = 0;
  do {
    out.push_back(decode_frame(bytes, offset));
  } while (offset < bytes.size());
  return out;
}

void write_frame_file(const std::filesystem::path& path, const FrameRecord& record) {
  write_file_atomic(path, encode_frame(record));
}

void write_frame_file(const std::filesystem::path& path, const std::vector<FrameRecord>& records) {
  require(!records.empty(), "write_frame_file: no frames");
  std::string bytes;
  for (const auto& r : records) bytes += encode_frame(r);
  write_file_atomic(path, bytes);
}

FrameRecord read_frame_file(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  std::size_t offset = 0;
  FrameRecord r = decode_frame(bytes, offset);
  if (offset != bytes.size()) throw FormatError(path.string() + ": trailing bytes after the frame record");
  return r;
}

std::vector<FrameRecord> read_frame_records(const std::filesystem::path& path) {
  try {
    return decode_frames(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace thermo
