#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cmath>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "thermo/core/resample.hpp"
#include "thermo/io/atomic_write.hpp"
#include "thermo/io/csv.hpp"
#include "thermo/io/frame_file.hpp"
#include "thermo/io/weight_file.hpp"
#include "thermo/nuc/single.hpp"

using namespace thermo;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("thermo_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::size_t count_files(const fs::path& dir, const std::string& ext) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ext) ++n;
  return n;
}

}  // namespace

TEST(Cli, ParseSize) {
  EXPECT_EQ(cli::parse_size("240x320"), (std::pair<std::size_t, std::size_t>{240, 320}));
  EXPECT_THROW(cli::parse_size("240"), ParameterError);
  EXPECT_THROW(cli::parse_size("0x4"), ParameterError);
  EXPECT_THROW(cli::parse_size("4x4y"), ParameterError);
}

TEST(Cli, UnknownCommandFails) {
  EXPECT_NE(run({"frobnicate"}).code, 0);
  EXPECT_NE(run({}).code, 0);
}

TEST(Cli, SimulateSingleAndMultiContracts) {
  const fs::path dir = fresh_dir("simulate");
  ASSERT_EQ(run({"synth-scenes", "--count", "10", "--size", "32x40", "--seed", "4", "--out", (dir / "gt").string()}).code,
            0);
  EXPECT_EQ(count_files(dir / "gt", ".tir"), 10U);

  ASSERT_EQ(run({"simulate", "--gt", (dir / "gt").string(), "--scale", "2", "--mode", "single", "--seed", "1", "--out",
                 (dir / "a").string()})
                .code,
            0);
  EXPECT_EQ(count_files(dir / "a" / "input", ".tir"), 10U);
  const FrameRecord in = read_frame_file(dir / "a" / "input" / "scene_0003.tir");
  EXPECT_EQ(in.kind, FrameKind::gray);
  EXPECT_EQ(in.grid.height(), 16U);
  EXPECT_EQ(in.grid.width(), 20U);
  EXPECT_TRUE(in.has_t_amb());
  EXPECT_EQ(read_csv(dir / "a" / "manifest.csv").rows.size(), 10U);

  ASSERT_EQ(run({"simulate", "--gt", (dir / "gt").string(), "--scale", "2", "--mode", "single", "--seed", "1", "--out",
                 (dir / "b").string()})
                .code,
            0);
  for (const auto& e : fs::directory_iterator(dir / "a" / "input"))
    EXPECT_EQ(read_file(e.path()), read_file(dir / "b" / "input" / e.path().filename()));

  ASSERT_EQ(run({"simulate", "--gt", (dir / "gt").string(), "--scale", "2", "--mode", "multi7", "--margin", "3", "--out",
                 (dir / "m").string()})
                .code,
            0);
  const auto burst = read_frame_records(dir / "m" / "input" / "scene_0000.tir");
  EXPECT_EQ(burst.size(), 7U);
  EXPECT_EQ(burst[0].grid.height(), 10U);
  EXPECT_EQ(read_frame_file(dir / "m" / "target" / "scene_0000.tir").grid.height(), 20U);
  fs::remove_all(dir);
}

TEST(Cli, SimulateReportsBadInputs) {
  const fs::path dir = fresh_dir("simulate_bad");
  fs::create_directories(dir / "gt");
  write_frame_file(dir / "gt" / "odd.tir", temperature_record(Grid2D(9, 8, Unit::celsius, 20.0F), 20.0));
  write_frame_file(dir / "gt" / "ok.tir", temperature_record(Grid2D(8, 8, Unit::celsius, 20.0F), 20.0));
  write_file_atomic(dir / "gt" / "junk.tir", "not a frame");
  const CliRun r = run({"simulate", "--gt", (dir / "gt").string(), "--out", (dir / "o").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("odd.tir"), std::string::npos);
  EXPECT_NE(r.err.find("junk.tir"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "o" / "input" / "ok.tir"));
  fs::remove_all(dir);
}

TEST(Cli, PipelineShapesAndZeroSrSkip) {
  const fs::path dir = fresh_dir("pipeline");
  cli::ArchOptions arch;
  arch.nuc_depth = 2;
  arch.nuc_width = 4;
  arch.sr_channels = 16;
  arch.sr_blocks = 1;
  const WeightStore w = cli::initial_weights(arch, NucMode::single(), 4, 1);
  save_weights(w.with_prefix("nuc."), dir / "nuc.twt");
  WeightStore sr = w.with_prefix("sr.");
  for (const auto& name : sr.parameter_names()) {
    Tensor<float> zero = sr.get(name);
    for (auto& v : zero.values()) v = 0.0F;
    sr.set(name, zero);
  }
  save_weights(sr, dir / "sr.twt");

  std::mt19937_64 rng(1);
  Grid2D levels(120, 160, Unit::graylevel);
  for (auto& v : levels.values()) v = static_cast<float>(std::uniform_int_distribution<int>(10, 60)(rng));
  fs::create_directories(dir / "in");
  write_frame_file(dir / "in" / "f.tir", gray_record(levels, 22.0));
  write_frame_file(dir / "in" / "no_tamb.tir", FrameRecord{FrameKind::gray, levels});

  const std::string weights = (dir / "nuc.twt").string() + "," + (dir / "sr.twt").string();
  CliRun r = run({"pipeline", "--input", (dir / "in").string(), "--weights", weights, "--scale", "4", "--out",
               (dir / "out").string()});
  EXPECT_EQ(r.code, 1);  // no_tamb.tir has no ambient temperature
  EXPECT_NE(r.err.find("no_tamb.tir"), std::string::npos);
  const FrameRecord out = read_frame_file(dir / "out" / "f.tir");
  EXPECT_EQ(out.grid.height(), 480U);
  EXPECT_EQ(out.grid.width(), 640U);
  const Grid2D nuc = nuc_single(GrayFrame{levels, 22.0}, 22.0, w.with_prefix("nuc."));
  const Grid2D up = bicubic_resample(nuc, Ratio::up(4));
  double worst = 0.0;
  for (std::size_t i = 0; i < up.size(); ++i) worst = std::max(worst, std::abs(double(up.data()[i]) - out.grid.data()[i]));
  EXPECT_LT(worst, 1e-4);

  r = run({"pipeline", "--input", (dir / "in" / "no_tamb.tir").string(), "--tamb", "22", "--weights", weights,
           "--scale", "4", "--out", (dir / "out2").string()});
  EXPECT_EQ(r.code, 0);
  r = run({"pipeline", "--input", (dir / "in").string(), "--weights", weights, "--scale", "2", "--out",
           (dir / "out3").string()});
  EXPECT_EQ(r.code, 1);
  r = run({"pipeline", "--input", (dir / "in").string(), "--weights", weights, "--scale", "4", "--mode", "multi",
           "--out", (dir / "out3").string()});
  EXPECT_EQ(r.code, 1);
  fs::remove_all(dir);
}

TEST(Cli, EvalAndReport) {
  const fs::path dir = fresh_dir("eval");
  ASSERT_EQ(run({"synth-scenes", "--count", "3", "--size", "24x24", "--out", (dir / "gt").string()}).code, 0);
  CliRun r = run({"eval", "--pred", (dir / "gt").string(), "--gt", (dir / "gt").string(), "--mask",
               (dir / "gt" / "masks").string(), "--out", (dir / "m.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const CsvTable t = read_csv(dir / "m.csv");
  ASSERT_EQ(t.header.size(), 8U);
  EXPECT_EQ(t.header.front(), "frame_id");
  EXPECT_EQ(t.header.back(), "cwsi_err");
  ASSERT_EQ(t.rows.size(), 4U);
  EXPECT_EQ(t.rows.back()[0], "mean");
  for (const auto& row : t.rows) {
    EXPECT_EQ(row[1], "0");
    EXPECT_EQ(row[2], "inf");
    EXPECT_NEAR(parse_number(row[3]), 1.0, 1e-9);
    EXPECT_EQ(row[4], "0");
  }

  r = run({"report", "--eval", (dir / "m.csv").string(), "--pred", (dir / "gt").string(), "--gt",
           (dir / "gt").string(), "--out", (dir / "rep").string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(count_files(dir / "rep", ".svg"), 2 * 3 + 1U);
  for (const auto& e : fs::directory_iterator(dir / "rep")) {
    std::istringstream in(read_file(e.path()));
    boost::property_tree::ptree tree;
    EXPECT_NO_THROW(boost::property_tree::read_xml(in, tree)) << e.path();
  }

  fs::copy(dir / "gt", dir / "pred");
  fs::remove(dir / "pred" / "scene_0001.tir");
  r = run({"eval", "--pred", (dir / "pred").string(), "--gt", (dir / "gt").string(), "--out",
           (dir / "m2.csv").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("scene_0001"), std::string::npos);
  EXPECT_EQ(read_csv(dir / "m2.csv").rows.size(), 3U);
  fs::remove_all(dir);
}

TEST(Cli, TrainAndPretrainWriteArtifacts) {
  const fs::path dir = fresh_dir("train");
  ASSERT_EQ(run({"synth-scenes", "--count", "10", "--size", "16x16", "--out", (dir / "gt").string()}).code, 0);
  ASSERT_EQ(run({"simulate", "--gt", (dir / "gt").string(), "--out", (dir / "data").string()}).code, 0);
  const std::vector<std::string> arch{"--nuc-depth", "2", "--nuc-width", "4", "--sr-channels", "4", "--sr-blocks", "1"};
  std::vector<std::string> pre{"pretrain", "--module", "sr", "--data", (dir / "data").string(), "--epochs", "2",
                               "--out", (dir / "pre").string()};
  pre.insert(pre.end(), arch.begin(), arch.end());
  CliRun r = run(pre);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "pre" / "sr.twt"));
  EXPECT_FALSE(fs::exists(dir / "pre" / "nuc.twt"));

  std::vector<std::string> tr{"train", "--data", (dir / "data").string(), "--epochs", "2", "--out",
                              (dir / "e2e").string()};
  tr.insert(tr.end(), arch.begin(), arch.end());
  r = run(tr);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_csv(dir / "e2e" / "train_log.csv").rows.size(), 2U);
  r = run({"pipeline", "--input", (dir / "data" / "input").string(), "--weights",
           (dir / "e2e" / "nuc.twt").string() + "," + (dir / "e2e" / "sr.twt").string(), "--out",
           (dir / "pred").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_files(dir / "pred", ".tir"), 10U);

  // A NaN target aborts training with a nonzero exit.
  const fs::path target = dir / "data" / "target" / "scene_0000.tir";
  FrameRecord t = read_frame_file(target);
  t.grid.values()[0] = NAN;
  write_frame_file(target, t);
  std::vector<std::string> nan_run{"train", "--data", (dir / "data").string(), "--epochs", "1", "--val-fraction",
                                   "0", "--out", (dir / "nan").string()};
  nan_run.insert(nan_run.end(), arch.begin(), arch.end());
  r = run(nan_run);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("aborted"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, BenchIsDeterministicAcrossThreads) {
  cli::BenchOptions o;
  o.height = 24;
  o.width = 32;
  o.reps = 3;
  o.arch.nuc_depth = 2;
  o.arch.nuc_width = 8;
  o.arch.sr_channels = 8;
  o.arch.sr_blocks = 1;
  o.threads = 1;
  const auto a = cli::run_bench(o);
  o.threads = 3;
  const auto b = cli::run_bench(o);
  EXPECT_EQ(a.output_hash, b.output_hash);
  EXPECT_EQ(b.threads, 3U);
  EXPECT_GT(a.end_to_end_seconds, 0.0);
  o.reps = 2;
  EXPECT_THROW(cli::run_bench(o), ContractViolation);
  const CliRun r = run({"bench", "--size", "16x16", "--reps", "3", "--nuc-depth", "2", "--nuc-width", "4",
                     "--sr-channels", "4", "--sr-blocks", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("end-to-end"), std::string::npos);
}
