#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "thermo/nn/weight_store.hpp"
#include "thermo/nuc/mode.hpp"
#include "thermo/train/dataset.hpp"
#include "thermo/train/trainer.hpp"

namespace thermo::cli {

namespace fs = std::filesystem;

// "HxW" -> {H, W}; ParameterError on junk.
std::pair<std::size_t, std::size_t> parse_size(const std::string& text);

// `.tir` files of a directory in name order (a single file is returned as is).
std::vector<fs::path> frame_files(const fs::path& path);

struct ArchOptions {
  std::size_t nuc_depth = 6;
  std::size_t nuc_width = 32;
  std::size_t kernel = 5;
  double gain_nominal = 1.0;
  double offset_nominal = 0.0;
  double offset_scale = 1.0;
  std::size_t sr_channels = 32;
  std::size_t sr_blocks = 4;
};

// Fresh NUC ("nuc.") and SR ("sr.") records.
WeightStore initial_weights(const ArchOptions& arch, const NucMode& mode, std::size_t scale, std::uint64_t seed);

// Reads "nuc.twt,sr.twt" or one combined file.
WeightStore load_weight_list(const std::string& list);

struct SynthOptions {
  std::size_t count = 10;
  std::size_t height = 64;
  std::size_t width = 64;
  double tamb_min = 10.0;
  double tamb_max = 35.0;
  std::uint64_t seed = 0;
  fs::path out;
};
int cmd_synth_scenes(const SynthOptions& o, std::ostream& log);

struct SimulateOptions {
  fs::path gt;
  std::optional<fs::path> camera_params;
  std::size_t scale = 2;
  NucMode mode;
  BurstMotion motion;
  std::uint64_t seed = 0;
  double tamb_min = 10.0;
  double tamb_max = 35.0;
  fs::path out;
};
int cmd_simulate(const SimulateOptions& o, std::ostream& log);

// Reads a simulated dataset directory (manifest.csv) and splits it.
Dataset load_dataset(const fs::path& dir, const NucMode& mode, double val_fraction, std::uint64_t seed);

struct TrainOptions {
  fs::path data;
  fs::path out;
  std::optional<std::string> init;
  ArchOptions arch;
  TrainConfig config;
  double val_fraction = 0.2;
  // Set for pretraining.
  std::optional<Module> module;
};
int cmd_train(const TrainOptions& o, std::ostream& log);

struct PipelineOptions {
  fs::path input;
  std::optional<double> t_amb;  // empty: read the frame header
  std::string weights;
  std::size_t scale = 2;
  NucMode mode;
  fs::path out;
};
int cmd_pipeline(const PipelineOptions& o, std::ostream& log);

struct EvalOptions {
  fs::path pred;
  fs::path gt;
  std::optional<fs::path> mask;
  std::optional<double> t_amb;
  double psnr_peak = 90.0;
  fs::path out;
};
int cmd_eval(const EvalOptions& o, std::ostream& log);

struct BenchOptions {
  std::size_t height = 240;
  std::size_t width = 320;
  std::size_t scale = 2;
  NucMode mode;
  std::size_t reps = 5;
  std::optional<std::size_t> threads;
  std::optional<std::string> weights;
  ArchOptions arch;
  std::optional<fs::path> out;
};

struct BenchReport {
  double nuc_seconds = 0.0;
  double sr_seconds = 0.0;
  double end_to_end_seconds = 0.0;
  std::size_t threads = 1;
  // FNV-1a of the end-to-end output bytes.
  std::uint64_t output_hash = 0;

  std::string csv() const;
};
BenchReport run_bench(const BenchOptions& o);
int cmd_bench(const BenchOptions& o, std::ostream& log);

struct ReportOptions {
  fs::path eval;
  fs::path pred;
  fs::path gt;
  fs::path out;
};
int cmd_report(const ReportOptions& o, std::ostream& log);

// Full command line (args[0] is the subcommand); returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace thermo::cli
