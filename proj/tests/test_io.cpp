#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>

#include "test_util.hpp"
#include "thermo/core/error.hpp"
#include "thermo/io/atomic_write.hpp"
#include "thermo/io/csv.hpp"
#include "thermo/io/frame_file.hpp"
#include "thermo/io/svg.hpp"
#include "thermo/io/weight_file.hpp"

using namespace thermo;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("thermo_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

FrameRecord random_frame(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dim(1, 24);
  const std::size_t h = dim(rng), w = dim(rng);
  if (rng() % 2 == 0) {
    std::uniform_int_distribution<int> level(0, 65535);
    Grid2D g(h, w, Unit::graylevel);
    for (auto& v : g.values()) v = static_cast<float>(level(rng));
    return gray_record(g, std::uniform_real_distribution<double>(-20, 70)(rng));
  }
  // Arbitrary bit patterns except NaN payloads, which do not compare equal.
  Grid2D g(h, w);
  for (auto& v : g.values()) {
    do {
      const auto bits = static_cast<std::uint32_t>(rng());
      std::memcpy(&v, &bits, sizeof v);
    } while (std::isnan(v));
  }
  return rng() % 3 == 0 ? temperature_record(g) : temperature_record(g, 21.5);
}

WeightStore random_store(std::mt19937_64& rng) {
  WeightStore s;
  const std::size_t n = rng() % 6;
  for (std::size_t i = 0; i < n; ++i) {
    Shape shape;
    const std::size_t rank = 1 + rng() % 4;
    for (std::size_t r = 0; r < rank; ++r) shape.push_back(1 + rng() % 4);
    s.set("layer" + std::to_string(i) + (i % 2 ? ".w" : ".b"), testutil::random_tensor<float>(shape, rng, -5, 5));
  }
  return s;
}

bool same_bits(const Grid2D& a, const Grid2D& b) {
  return a.height() == b.height() && a.width() == b.width() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

}  // namespace

TEST(FrameFile, RandomRoundTripsAreBitExact) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const FrameRecord r = random_frame(rng);
    const std::string bytes = encode_frame(r);
    std::size_t off = 0;
    const FrameRecord back = decode_frame(bytes, off);
    EXPECT_EQ(off, bytes.size());
    EXPECT_EQ(back.kind, r.kind);
    EXPECT_TRUE(same_bits(back.grid, r.grid));
    EXPECT_EQ(back.has_t_amb(), r.has_t_amb());
    if (r.has_t_amb()) EXPECT_EQ(back.t_amb, r.t_amb);
    EXPECT_EQ(encode_frame(back), bytes);
  }
}

TEST(FrameFile, HeaderLayout) {
  const FrameRecord r = gray_record(Grid2D(2, 3, {1, 2, 3, 4, 5, 65535}, Unit::graylevel), 25.0);
  const std::string b = encode_frame(r);
  ASSERT_EQ(b.size(), 4U + 1 + 4 + 4 + 4 + 6 * 2);
  EXPECT_EQ(b.substr(0, 4), "TIR1");
  EXPECT_EQ(b[4], 0);
  EXPECT_EQ(static_cast<unsigned char>(b[5]), 2);
  EXPECT_EQ(static_cast<unsigned char>(b[9]), 3);
  float t;
  std::memcpy(&t, b.data() + 13, 4);
  EXPECT_EQ(t, 25.0F);
  EXPECT_EQ(static_cast<unsigned char>(b.back()), 0xFF);
}

TEST(FrameFile, BurstFilesAndErrors) {
  const fs::path dir = temp_dir("frames");
  std::mt19937_64 rng(2);
  std::vector<FrameRecord> burst;
  for (int i = 0; i < 7; ++i) burst.push_back(gray_record(Grid2D(4, 5, Unit::graylevel, 100.0F + i), 30.0));
  write_frame_file(dir / "b.tir", burst);
  const auto back = read_frame_records(dir / "b.tir");
  ASSERT_EQ(back.size(), 7U);
  EXPECT_EQ(back[6].grid(0, 0), 106.0F);
  EXPECT_THROW(read_frame_file(dir / "b.tir"), FormatError);
  EXPECT_THROW(read_frame_file(dir / "missing.tir"), FormatError);

  std::string bytes = encode_frame(burst[0]);
  EXPECT_THROW(decode_frames(bytes.substr(0, bytes.size() - 1)), FormatError);
  std::string bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(decode_frames(bad), FormatError);
  bad = bytes;
  bad[4] = 7;
  EXPECT_THROW(decode_frames(bad), FormatError);
  EXPECT_THROW(encode_frame(gray_record(Grid2D(1, 1, Unit::graylevel, 1.5F), 0)), FormatError);
  EXPECT_THROW(encode_frame(gray_record(Grid2D(1, 1, Unit::graylevel, 70000.0F), 0)), FormatError);
  EXPECT_TRUE(std::isnan(temperature_record(Grid2D(1, 1)).t_amb));
  fs::remove_all(dir);
}

TEST(WeightFile, RandomRoundTripsAreBitExact) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const WeightStore s = random_store(rng);
    const std::string bytes = encode_weights(s);
    const WeightStore back = decode_weights(bytes);
    EXPECT_EQ(back, s);
    EXPECT_EQ(encode_weights(back), bytes);
  }
}

TEST(WeightFile, RejectsMalformedInput) {
  WeightStore s;
  s.set("a.w", Tensor<float>({2, 2}, 1.0F));
  const std::string bytes = encode_weights(s);
  EXPECT_EQ(bytes.substr(0, 4), "TWT1");
  EXPECT_THROW(decode_weights(bytes.substr(0, bytes.size() - 2)), FormatError);
  EXPECT_THROW(decode_weights(bytes + "x"), FormatError);
  EXPECT_THROW(decode_weights("TWT2" + bytes.substr(4)), FormatError);
  // Same record twice, count patched to 2.
  std::string dup = bytes + bytes.substr(8);
  dup[4] = 2;
  EXPECT_THROW(decode_weights(dup), FormatError);

  const fs::path dir = temp_dir("weights");
  save_weights(s, dir / "w.twt");
  EXPECT_EQ(load_weights(dir / "w.twt"), s);
  EXPECT_THROW(load_weights(dir / "nope.twt"), FormatError);
  fs::remove_all(dir);
}

TEST(AtomicWrite, ReplacesWithoutLeftovers) {
  const fs::path dir = temp_dir("atomic");
  write_file_atomic(dir / "f.txt", "one");
  write_file_atomic(dir / "f.txt", "two");
  EXPECT_EQ(read_file(dir / "f.txt"), "two");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir), fs::directory_iterator()), 1);
  fs::remove_all(dir);
}

TEST(Csv, NumbersRoundTrip) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
    EXPECT_EQ(parse_number(format_number(v)), v);
  }
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_TRUE(std::isinf(parse_number("inf")));
  EXPECT_THROW(parse_number("12abc"), FormatError);
  EXPECT_THROW(parse_number(""), FormatError);
}

TEST(Csv, TablesRoundTrip) {
  CsvTable t{{"frame_id", "mae"}, {{"a", "0.5"}, {"b", "inf"}}};
  const CsvTable back = parse_csv(t.text());
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.column("mae"), 1U);
  EXPECT_THROW(back.column("psnr"), FormatError);
  EXPECT_THROW(parse_csv("a,b\n1\n"), FormatError);
}

TEST(Svg, OutputsAreWellFormedXml) {
  std::mt19937_64 rng(5);
  const Grid2D gt = testutil::random_grid(40, 300, rng, 10, 40);
  const Grid2D est = testutil::random_grid(40, 300, rng, 10, 40);
  const std::vector<std::string> docs{
      line_profile_svg("frame <1> & co", gt, est), error_map_svg("err \"map\"", gt, est),
      table_svg("summary", {{"frame_id", "mae"}, {"a&b", "0.1"}}), error_map_svg("zero", gt, gt)};
  for (const auto& doc : docs) {
    std::istringstream in(doc);
    boost::property_tree::ptree tree;
    EXPECT_NO_THROW(boost::property_tree::read_xml(in, tree)) << doc.substr(0, 200);
    EXPECT_EQ(tree.count("svg"), 1U);
  }
  EXPECT_EQ(xml_escape("<a&'\">"), "&lt;a&amp;&apos;&quot;&gt;");
}

TEST(Svg, ErrorMapOfIdenticalMapsIsUniform) {
  const Grid2D g(8, 8, Unit::celsius, 20.0F);
  const std::string doc = error_map_svg("z", g, g);
  // Every cell uses the same (zero-error) fill.
  std::size_t first = doc.find("fill=\"");
  ASSERT_NE(first, std::string::npos);
  std::set<std::string> fills;
  for (std::size_t p = doc.find("<rect"); p != std::string::npos; p = doc.find("<rect", p + 1)) {
    const std::size_t f = doc.find("fill=\"", p);
    fills.insert(doc.substr(f, doc.find('"', f + 6) - f));
  }
  EXPECT_LE(fills.size(), 2U);  // background plus one cell color
}
