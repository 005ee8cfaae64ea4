#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "thermo/nn/weight_store.hpp"

namespace thermo {

/// `TWT1`, u32 record count, then per record: u32 name length, UTF-8 name,
/// u32 rank, rank u32 dims, f32 values (all little-endian).
std::string encode_weights(const WeightStore& store);
WeightStore decode_weights(std::string_view bytes);

void save_weights(const WeightStore& store, const std::filesystem::path& path);
WeightStore load_weights(const std::filesystem::path& path);

}  // namespace thermo
