#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

#include "thermo/core/error.hpp"

namespace thermo::binary {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFU));
}

inline void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFFU));
  out.push_back(static_cast<char>(v >> 8));
}

inline void put_f32(std::string& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

/// Bounds-checked little-endian reader.
class Reader {
 public:
  Reader(std::string_view bytes, std::size_t offset, std::string what)
      : bytes_(bytes), pos_(offset), what_(std::move(what)) {}

  std::string_view take(std::size_t n) {
    if (n > bytes_.size() - pos_) throw FormatError(what_ + ": truncated data");
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint16_t u16() {
    auto s = take(2);
    return static_cast<std::uint16_t>(static_cast<std::uint8_t>(s[0]) | (static_cast<std::uint8_t>(s[1]) << 8));
  }
  std::uint32_t u32() {
    auto s = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(s[i])) << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_;
  std::string what_;
};

}  // namespace thermo::binary
