#include "thermo/io/weight_file.hpp"

#include "thermo/core/error.hpp"
#include "thermo/io/atomic_write.hpp"
#include "thermo/io/binary.hpp"

namespace thermo {
namespace {

constexpr std::string_view kMagic = "TWT1";

}  // namespace

std::string encode_weights(const WeightStore& store) {
  std::string out(kMagic);
  binary::put_u32(out, static_cast<std::uint32_t>(store.size()));
  for (const auto& [name, t] : store.tensors()) {
    binary::put_u32(out, static_cast<std::uint32_t>(name.size()));
    out.append(name);
    binary::put_u32(out, static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.shape()) binary::put_u32(out, static_cast<std::uint32_t>(d));
    for (float v : t.values()) binary::put_f32(out, v);
  }
  return out;
}

WeightStore decode_weights(std::string_view bytes) {
  binary::Reader in(bytes, 0, "weight file");
  if (in.take(4) != kMagic) throw FormatError("weight file: bad magic (expected TWT1)");
  const std::uint32_t count = in.u32();
  WeightStore store;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t len = in.u32();
    std::string name(in.take(len));
    if (name.empty()) throw FormatError("weight file: empty record name");
    if (store.contains(name)) throw FormatError("weight file: duplicate record '" + name + "'");
    const std::uint32_t rank = in.u32();
    if (rank < 1 || rank > 4) throw FormatError("weight file: record '" + name + "' has rank " + std::to_string(rank));
    Shape shape(rank);
    std::uint64_t n = 1;
    for (auto& d : shape) {
      d = in.u32();
      n *= d;
      if (n > in.remaining()) throw FormatError("weight file: record '" + name + "' larger than the file");
    }
    if (n * 4 > in.remaining()) throw FormatError("weight file: record '" + name + "' truncated");
    std::vector<float> values(n);
    for (auto& v : values) v = in.f32();
    store.set(name, Tensor<float>(std::move(shape), std::move(values)));
  }
  if (in.remaining() != 0) throw FormatError("weight file: trailing bytes after the last record");
  return store;
}

void save_weights(const WeightStore& store, const std::filesystem::path& path) {
  write_file_atomic(path, encode_weights(store));
}

WeightStore load_weights(const std::filesystem::path& path) {
  try {
    return decode_weights(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace thermo
