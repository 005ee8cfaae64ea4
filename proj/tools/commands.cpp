#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "thermo/core/error.hpp"
#include "thermo/core/parallel.hpp"
#include "thermo/io/atomic_write.hpp"
#include "thermo/io/csv.hpp"
#include "thermo/io/frame_file.hpp"
#include "thermo/io/svg.hpp"
#include "thermo/io/weight_file.hpp"
#include "thermo/metrics/metrics.hpp"
#include "thermo/nuc/multi.hpp"
#include "thermo/nuc/single.hpp"
#include "thermo/pipeline/pipeline.hpp"
#include "thermo/sim/random.hpp"
#include "thermo/sim/scenes.hpp"
#include "thermo/sr/sr_net.hpp"

namespace thermo::cli {
namespace {

constexpr const char* kManifest = "manifest.csv";

std::string stem(const fs::path& p) { return p.stem().string(); }

Grid2D mask_grid(const std::vector<std::uint8_t>& mask, std::size_t h, std::size_t w) {
  Grid2D g(h, w, Unit::graylevel);
  for (std::size_t i = 0; i < mask.size(); ++i) g.data()[i] = mask[i];
  return g;
}

std::vector<std::uint8_t> read_mask(const fs::path& path) {
  const FrameRecord r = read_frame_file(path);
  std::vector<std::uint8_t> mask(r.grid.size());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = r.grid.data()[i] != 0.0F ? 1 : 0;
  return mask;
}

std::vector<GrayFrame> gray_frames(const std::vector<FrameRecord>& records, const std::string& what) {
  std::vector<GrayFrame> frames;
  for (const auto& r : records) {
    if (r.kind != FrameKind::gray) throw FormatError(what + ": expected gray-level frames");
    frames.push_back(GrayFrame{r.grid.retagged(Unit::graylevel), r.t_amb});
  }
  return frames;
}

Burst make_burst(std::vector<GrayFrame> frames, double t_amb) {
  Burst b;
  b.t_amb = t_amb;
  for (auto& f : frames) f.t_amb = t_amb;
  b.frames = std::move(frames);
  b.validate();
  return b;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::uint64_t fnv1a(const Grid2D& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(g.data());
  for (std::size_t i = 0; i < g.size() * sizeof(float); ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

CameraParams bench_camera() {
  CameraParams c;
  c.gain_poly = {20.0, 0.02};
  c.offset_poly = {2000.0, 3.0};
  c.radial_profile = {1.0, 0.0, -0.1};
  c.noise_sigma = 2.0;
  c.seed = 1;
  return c;
}

}  // namespace

std::pair<std::size_t, std::size_t> parse_size(const std::string& text) {
  const auto x = text.find_first_of("xX");
  try {
    if (x != std::string::npos && x > 0 && x + 1 < text.size()) {
      std::size_t used_h = 0, used_w = 0;
      const std::string hs = text.substr(0, x), ws = text.substr(x + 1);
      const unsigned long h = std::stoul(hs, &used_h);
      const unsigned long w = std::stoul(ws, &used_w);
      if (used_h == hs.size() && used_w == ws.size() && h > 0 && w > 0) return {h, w};
    }
  } catch (const std::exception&) {
  }
  throw ParameterError("size must look like HxW, got '" + text + "'");
}

std::vector<fs::path> frame_files(const fs::path& path) {
  if (fs::is_regular_file(path)) return {path};
  if (!fs::is_directory(path)) throw FormatError("no such file or directory: " + path.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(path))
    if (e.is_regular_file() && e.path().extension() == ".tir") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

WeightStore initial_weights(const ArchOptions& arch, const NucMode& mode, std::size_t scale, std::uint64_t seed) {
  WeightStore w;
  if (mode.multi()) {
    MultiNucConfig mc;
    mc.frames = mode.frames;
    mc.depth = arch.nuc_depth;
    mc.width = arch.nuc_width;
    mc.kernel = arch.kernel;
    mc.gain_nominal = arch.gain_nominal;
    mc.offset_nominal = arch.offset_nominal;
    w = init_multi_nuc(mc, seed);
  } else {
    SingleNucConfig sc;
    sc.depth = arch.nuc_depth;
    sc.width = arch.nuc_width;
    sc.gain_nominal = arch.gain_nominal;
    sc.offset_nominal = arch.offset_nominal;
    sc.offset_scale = arch.offset_scale;
    w = init_single_nuc(sc, seed);
  }
  SrConfig rc;
  rc.scale = scale;
  rc.channels = arch.sr_channels;
  rc.blocks = arch.sr_blocks;
  w.merge(init_sr(rc, seed));
  return w;
}

WeightStore load_weight_list(const std::string& list) {
  WeightStore out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.merge(load_weights(item));
  if (out.size() == 0) throw LoadError("no weight files given");
  return out;
}

int cmd_synth_scenes(const SynthOptions& o, std::ostream& log) {
  require(o.tamb_min <= o.tamb_max, "synth-scenes: tamb-min above tamb-max");
  fs::create_directories(o.out / "masks");
  Rng rng(hash_key(o.seed, 0x53594e54ULL));
  for (std::size_t i = 0; i < o.count; ++i) {
    const double t_amb = rng.uniform(o.tamb_min, o.tamb_max);
    const Scene s = canopy_scene(o.height, o.width, t_amb, hash_key(o.seed, i));
    char name[32];
    std::snprintf(name, sizeof name, "scene_%04zu.tir", i);
    write_frame_file(o.out / name, temperature_record(s.temperature, t_amb));
    write_frame_file(o.out / "masks" / name, gray_record(mask_grid(s.canopy_mask, o.height, o.width), t_amb));
  }
  log << "wrote " << o.count << " scenes to " << o.out.string() << '\n';
  return 0;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& log) {
  const CameraParams camera = o.camera_params ? load_camera_params(*o.camera_params) : CameraParams{};
  const std::vector<fs::path> files = frame_files(o.gt);
  for (const char* sub : {"input", "target", "lr"}) fs::create_directories(o.out / sub);
  CsvTable manifest{{"id", "input", "target", "lr_target", "t_amb", "frames"}, {}};
  int failures = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const std::string id = stem(files[i]);
    try {
      const FrameRecord gt = read_frame_file(files[i]);
      if (gt.kind != FrameKind::temperature) throw FormatError("ground truth must be a temperature frame");
      const double t_amb =
          gt.has_t_amb() ? gt.t_amb : Rng(hash_key(o.seed, 0x54414d42ULL, i)).uniform(o.tamb_min, o.tamb_max);
      CameraParams cam = camera;
      cam.seed = hash_key(camera.seed, o.seed, i);
      const TrainingPair pair =
          o.mode.multi() ? make_training_pair(gt.grid, o.scale, AmbientTemperature(t_amb), cam, o.mode.frames, o.motion)
                         : make_training_pair(gt.grid, o.scale, AmbientTemperature(t_amb), cam);
      std::vector<FrameRecord> input;
      if (pair.burst)
        for (const auto& f : pair.burst->frames) input.push_back(gray_record(f.levels, t_amb));
      else
        input.push_back(gray_record(pair.frame->levels, t_amb));
      const std::string file = id + ".tir";
      write_frame_file(o.out / "input" / file, input);
      write_frame_file(o.out / "target" / file, temperature_record(pair.target, t_amb));
      write_frame_file(o.out / "lr" / file, temperature_record(pair.lr_target, t_amb));
      manifest.rows.push_back({id, "input/" + file, "target/" + file, "lr/" + file, format_number(t_amb),
                               std::to_string(input.size())});
    } catch (const std::exception& e) {
      log << "error: " << files[i].string() << ": " << e.what() << '\n';
      ++failures;
    }
  }
  write_csv(o.out / kManifest, manifest);
  log << "simulated " << manifest.rows.size() << " of " << files.size() << " scenes\n";
  return failures ? 1 : 0;
}

Dataset load_dataset(const fs::path& dir, const NucMode& mode, double val_fraction, std::uint64_t seed) {
  const CsvTable m = read_csv(dir / kManifest);
  const std::size_t c_id = m.column("id"), c_in = m.column("input"), c_t = m.column("target"),
                    c_lr = m.column("lr_target"), c_amb = m.column("t_amb");
  std::vector<TrainingPair> pairs;
  for (const auto& row : m.rows) {
    TrainingPair p;
    p.id = row[c_id];
    p.t_amb = parse_number(row[c_amb]);
    std::vector<GrayFrame> frames = gray_frames(read_frame_records(dir / row[c_in]), row[c_in]);
    if (mode.multi()) {
      if (frames.size() != mode.frames)
        throw LoadError(p.id + ": burst has " + std::to_string(frames.size()) + " frames, mode expects " +
                        std::to_string(mode.frames));
      p.burst = make_burst(std::move(frames), p.t_amb);
    } else {
      if (frames.size() != 1) throw LoadError(p.id + ": single mode expects one frame per input");
      frames[0].t_amb = p.t_amb;
      p.frame = frames[0];
    }
    p.target = read_frame_file(dir / row[c_t]).grid;
    p.lr_target = read_frame_file(dir / row[c_lr]).grid;
    pairs.push_back(std::move(p));
  }
  const std::vector<std::size_t> val = validation_indices(pairs.size(), val_fraction, seed);
  Dataset d;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    (std::binary_search(val.begin(), val.end(), i) ? d.val : d.train).push_back(std::move(pairs[i]));
  return d;
}

int cmd_train(const TrainOptions& o, std::ostream& log) {
  TrainConfig cfg = o.config;
  cfg.validate();
  const Dataset data = load_dataset(o.data, cfg.mode, o.val_fraction, cfg.seed);
  if (data.train.empty()) throw ContractViolation("train: dataset has no training pairs");
  const WeightStore init = o.init ? load_weight_list(*o.init) : initial_weights(o.arch, cfg.mode, cfg.scale, cfg.seed);
  auto user = cfg.on_epoch;
  cfg.on_epoch = [&](const TrainLogRow& r) {
    log << "epoch " << r.epoch << " loss " << format_number(r.train_loss) << " val_mae " << format_number(r.val_mae)
        << '\n';
    if (user) user(r);
  };
  TrainResult res;
  try {
    res = o.module ? pretrain_module(*o.module, cfg, data, init) : train_end_to_end(cfg, data, init);
  } catch (const TrainingAborted& e) {
    log << "error: " << e.what() << '\n';
    return 2;
  }
  fs::create_directories(o.out);
  const bool want_nuc = !o.module || *o.module == Module::nuc;
  const bool want_sr = !o.module || *o.module == Module::sr;
  if (want_nuc) {
    save_weights(res.best_weights.with_prefix("nuc."), o.out / "nuc.twt");
    save_weights(res.weights.with_prefix("nuc."), o.out / "last_nuc.twt");
  }
  if (want_sr) {
    save_weights(res.best_weights.with_prefix("sr."), o.out / "sr.twt");
    save_weights(res.weights.with_prefix("sr."), o.out / "last_sr.twt");
  }
  res.log.save(o.out / "train_log.csv");
  log << "best val_mae " << format_number(res.best_val_mae) << " at epoch " << res.best_epoch << '\n';
  return 0;
}

int cmd_pipeline(const PipelineOptions& o, std::ostream& log) {
  const Pipeline pipe(load_weight_list(o.weights), o.scale);
  if (!(pipe.mode() == o.mode))
    throw LoadError("weights hold a " + to_string(pipe.mode()) + " network, --mode is " + to_string(o.mode));
  fs::create_directories(o.out);
  int failures = 0;
  std::size_t done = 0;
  for (const auto& file : frame_files(o.input)) {
    try {
      std::vector<GrayFrame> frames = gray_frames(read_frame_records(file), file.string());
      if (frames.size() != pipe.frames())
        throw FormatError("expected " + std::to_string(pipe.frames()) + " frame(s), file has " +
                          std::to_string(frames.size()));
      const double t_amb = o.t_amb ? *o.t_amb : frames.front().t_amb;
      if (std::isnan(t_amb)) throw FormatError("no ambient temperature in the header and no --tamb value");
      const PipelineOutput out = pipe.run(frames, t_amb);
      write_frame_file(o.out / file.filename(), temperature_record(out.sr, t_amb));
      ++done;
    } catch (const std::exception& e) {
      log << "error: " << file.string() << ": " << e.what() << '\n';
      ++failures;
    }
  }
  log << "processed " << done << " input(s)\n";
  return failures ? 1 : 0;
}

int cmd_eval(const EvalOptions& o, std::ostream& log) {
  MetricsConfig mc;
  mc.psnr_peak = o.psnr_peak;
  mc.validate();
  std::map<std::string, fs::path> preds, gts;
  for (const auto& p : frame_files(o.pred)) preds[stem(p)] = p;
  for (const auto& p : frame_files(o.gt)) gts[stem(p)] = p;
  int failures = 0;
  std::vector<FrameMetrics> rows;
  for (const auto& [id, gpath] : gts) {
    if (!preds.count(id)) {
      log << "unmatched ground truth: " << id << '\n';
      ++failures;
      continue;
    }
    try {
      const FrameRecord gt = read_frame_file(gpath);
      const FrameRecord pred = read_frame_file(preds.at(id));
      const double t_amb = o.t_amb ? *o.t_amb : gt.has_t_amb() ? gt.t_amb : pred.t_amb;
      if (std::isnan(t_amb)) throw FormatError("no ambient temperature available");
      std::optional<std::vector<std::uint8_t>> mask;
      if (o.mask) mask = read_mask(*o.mask / (id + ".tir"));
      rows.push_back(evaluate_frame(id, pred.grid, gt.grid, t_amb, mask ? &*mask : nullptr, mc));
    } catch (const std::exception& e) {
      log << "error: " << id << ": " << e.what() << '\n';
      ++failures;
    }
  }
  for (const auto& [id, p] : preds)
    if (!gts.count(id)) {
      log << "unmatched prediction: " << id << '\n';
      ++failures;
    }
  CsvTable t{{"frame_id", "mae", "psnr", "ssim", "emd", "cwsi_gt", "cwsi_est", "cwsi_err"}, {}};
  auto add = [&](const FrameMetrics& m) {
    t.rows.push_back({m.frame_id, format_number(m.mae), format_number(m.psnr), format_number(m.ssim),
                      format_number(m.emd), format_number(m.cwsi_gt), format_number(m.cwsi_est),
                      format_number(m.cwsi_err)});
  };
  for (const auto& r : rows) add(r);
  if (!rows.empty()) {
    FrameMetrics mean = mean_metrics(rows);
    mean.frame_id = "mean";
    add(mean);
    log << "mean mae " << format_number(mean.mae) << " psnr " << format_number(mean.psnr) << " ssim "
        << format_number(mean.ssim) << " emd " << format_number(mean.emd) << " cwsi_err "
        << format_number(mean.cwsi_err) << '\n';
  }
  write_csv(o.out, t);
  return failures ? 1 : 0;
}

std::string BenchReport::csv() const {
  CsvTable t{{"stage", "seconds_per_frame", "fps", "threads"}, {}};
  auto row = [&](const char* name, double s) {
    t.rows.push_back({name, format_number(s), format_number(1.0 / s), std::to_string(threads)});
  };
  row("nuc", nuc_seconds);
  row("sr", sr_seconds);
  row("end_to_end", end_to_end_seconds);
  return t.text();
}

BenchReport run_bench(const BenchOptions& o) {
  require(o.reps >= 3, "bench: need at least 3 repetitions");
  if (o.threads) set_thread_count(*o.threads);
  const WeightStore w = o.weights ? load_weight_list(*o.weights) : initial_weights(o.arch, o.mode, o.scale, 1);
  const Pipeline pipe(w, o.scale);
  const double t_amb = 25.0;
  const Scene scene = canopy_scene(o.height, o.width, t_amb, 7);
  std::vector<GrayFrame> frames;
  if (pipe.frames() == 1) {
    frames.push_back(simulate_frame(scene.temperature, AmbientTemperature(t_amb), bench_camera()).frame);
  } else {
    // Scene with room for the burst motion around the benchmark size.
    const Scene wide = canopy_scene(o.height + 8, o.width + 8, t_amb, 7);
    MotionConfig mc;
    mc.out_height = o.height;
    mc.out_width = o.width;
    mc.max_shift = 3;
    mc.seed = 3;
    frames = synth_burst(wide.temperature, AmbientTemperature(t_amb), pipe.frames(), mc, bench_camera()).frames;
  }
  using clock = std::chrono::steady_clock;
  auto seconds = [](clock::time_point a, clock::time_point b) { return std::chrono::duration<double>(b - a).count(); };
  std::vector<double> tn, ts, te;
  Grid2D nuc_map, out;
  for (std::size_t r = 0; r < o.reps; ++r) {
    auto a = clock::now();
    nuc_map = pipe.nuc(frames, t_amb);
    auto b = clock::now();
    pipe.sr(nuc_map);
    auto c = clock::now();
    out = pipe.run(frames, t_amb).sr;
    auto d = clock::now();
    tn.push_back(seconds(a, b));
    ts.push_back(seconds(b, c));
    te.push_back(seconds(c, d));
  }
  BenchReport rep;
  rep.nuc_seconds = median(tn);
  rep.sr_seconds = median(ts);
  rep.end_to_end_seconds = median(te);
  rep.threads = thread_count();
  rep.output_hash = fnv1a(out);
  return rep;
}

int cmd_bench(const BenchOptions& o, std::ostream& log) {
  const BenchReport r = run_bench(o);
  auto line = [&](const char* name, double s) {
    log << name << ": " << format_number(s) << " s/frame, " << format_number(1.0 / s) << " fps\n";
  };
  log << o.height << "x" << o.width << " x" << o.scale << " " << to_string(o.mode) << ", " << r.threads
      << " thread(s), median of " << o.reps << '\n';
  line("nuc", r.nuc_seconds);
  line("sr", r.sr_seconds);
  line("end-to-end", r.end_to_end_seconds);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.output_hash));
  log << "output hash " << hash << '\n';
  if (o.out) write_file_atomic(*o.out, r.csv());
  return 0;
}

int cmd_report(const ReportOptions& o, std::ostream& log) {
  const CsvTable eval = read_csv(o.eval);
  const std::size_t c_id = eval.column("frame_id");
  fs::create_directories(o.out);
  int failures = 0;
  for (const auto& row : eval.rows) {
    const std::string& id = row[c_id];
    if (id == "mean") continue;
    const fs::path pred = o.pred / (id + ".tir");
    const fs::path gt = o.gt / (id + ".tir");
    if (!fs::exists(pred) || !fs::exists(gt)) {
      log << "warning: skipping " << id << ": frame pair not found\n";
      ++failures;
      continue;
    }
    try {
      const Grid2D p = read_frame_file(pred).grid;
      const Grid2D g = read_frame_file(gt).grid;
      write_file_atomic(o.out / (id + "_profile.svg"), line_profile_svg(id + " middle row", g, p));
      write_file_atomic(o.out / (id + "_error.svg"), error_map_svg(id + " |estimate - GT|", g, p));
    } catch (const std::exception& e) {
      log << "warning: skipping " << id << ": " << e.what() << '\n';
      ++failures;
    }
  }
  std::vector<std::vector<std::string>> table{eval.header};
  table.insert(table.end(), eval.rows.begin(), eval.rows.end());
  write_file_atomic(o.out / "summary.svg", table_svg("evaluation summary", table));
  return failures ? 1 : 0;
}

namespace {

NucMode mode_option(const std::string& text) { return parse_nuc_mode(text); }

std::optional<double> tamb_option(const std::string& text) {
  if (text == "auto") return std::nullopt;
  return parse_number(text);
}

void add_arch(CLI::App* c, ArchOptions& a) {
  c->add_option("--nuc-depth", a.nuc_depth, "NUC convolution layers");
  c->add_option("--nuc-width", a.nuc_width, "NUC feature channels");
  c->add_option("--kernel", a.kernel, "multiframe fusion kernel size");
  c->add_option("--gain-nominal", a.gain_nominal, "nominal camera gain (gray per degree C)");
  c->add_option("--offset-nominal", a.offset_nominal, "nominal camera offset (gray)");
  c->add_option("--offset-scale", a.offset_scale, "offset head scale (gray)");
  c->add_option("--sr-channels", a.sr_channels, "SR feature channels");
  c->add_option("--sr-blocks", a.sr_blocks, "SR residual blocks");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"thermopipe: thermal NUC + super-resolution toolkit"};
  app.require_subcommand(1);
  std::optional<std::size_t> threads;
  app.add_option("--threads", threads, "worker threads (default: THERMOPIPE_THREADS or all cores)");

  SynthOptions synth;
  std::string synth_size = "64x64";
  auto* c_synth = app.add_subcommand("synth-scenes", "write synthetic canopy temperature maps");
  c_synth->add_option("--count", synth.count);
  c_synth->add_option("--size", synth_size, "HxW");
  c_synth->add_option("--tamb-min", synth.tamb_min);
  c_synth->add_option("--tamb-max", synth.tamb_max);
  c_synth->add_option("--seed", synth.seed);
  c_synth->add_option("--out", synth.out)->required();

  SimulateOptions sim;
  std::string sim_mode = "single", camera;
  auto* c_sim = app.add_subcommand("simulate", "simulate camera frames from ground-truth maps");
  c_sim->add_option("--gt", sim.gt)->required();
  c_sim->add_option("--camera-params", camera);
  c_sim->add_option("--scale", sim.scale)->check(CLI::IsMember({2, 4}));
  c_sim->add_option("--mode", sim_mode);
  c_sim->add_option("--seed", sim.seed);
  c_sim->add_option("--tamb-min", sim.tamb_min);
  c_sim->add_option("--tamb-max", sim.tamb_max);
  c_sim->add_option("--margin", sim.motion.margin, "burst crop margin (pixels)");
  c_sim->add_option("--out", sim.out)->required();

  TrainOptions train;
  std::string train_mode = "single", init, module;
  auto* c_train = app.add_subcommand("train", "fine-tune NUC and SR end to end");
  auto* c_pre = app.add_subcommand("pretrain", "train the NUC or the SR network alone");
  for (auto* c : {c_train, c_pre}) {
    c->add_option("--data", train.data)->required();
    c->add_option("--out", train.out)->required();
    c->add_option("--init", init, "starting weights: nuc.twt,sr.twt or one combined file");
    c->add_option("--mode", train_mode);
    c->add_option("--scale", train.config.scale)->check(CLI::IsMember({2, 4}));
    c->add_option("--epochs", train.config.epochs);
    c->add_option("--batch", train.config.batch_size);
    c->add_option("--lr-sr", train.config.lr_sr);
    c->add_option("--lr-nuc", train.config.lr_nuc);
    c->add_option("--pretrain-lr", train.config.pretrain_lr);
    c->add_option("--weight-decay", train.config.weight_decay);
    c->add_option("--patience", train.config.plateau_patience);
    c->add_option("--val-fraction", train.val_fraction);
    c->add_option("--seed", train.config.seed);
    add_arch(c, train.arch);
  }
  c_pre->add_option("--module", module, "nuc or sr")->required()->check(CLI::IsMember({"nuc", "sr"}));

  PipelineOptions pipe;
  std::string pipe_mode = "single", pipe_tamb = "auto";
  auto* c_pipe = app.add_subcommand("pipeline", "run NUC then SR on gray-level frames");
  c_pipe->add_option("--input", pipe.input)->required();
  c_pipe->add_option("--tamb", pipe_tamb, "auto (frame header) or degrees C");
  c_pipe->add_option("--weights", pipe.weights)->required();
  c_pipe->add_option("--scale", pipe.scale)->check(CLI::IsMember({2, 4}));
  c_pipe->add_option("--mode", pipe_mode);
  c_pipe->add_option("--out", pipe.out)->required();

  EvalOptions ev;
  std::string eval_tamb = "auto", mask;
  auto* c_eval = app.add_subcommand("eval", "score predicted temperature maps against ground truth");
  c_eval->add_option("--pred", ev.pred)->required();
  c_eval->add_option("--gt", ev.gt)->required();
  c_eval->add_option("--mask", mask);
  c_eval->add_option("--tamb", eval_tamb);
  c_eval->add_option("--peak", ev.psnr_peak, "PSNR peak / SSIM range (degrees C)");
  c_eval->add_option("--out", ev.out)->required();

  BenchOptions bench;
  std::string bench_size = "240x320", bench_mode = "single", bench_weights, bench_out;
  auto* c_bench = app.add_subcommand("bench", "measure frames per second");
  c_bench->add_option("--size", bench_size, "HxW of the camera frame");
  c_bench->add_option("--scale", bench.scale)->check(CLI::IsMember({2, 4}));
  c_bench->add_option("--mode", bench_mode);
  c_bench->add_option("--reps", bench.reps);
  c_bench->add_option("--weights", bench_weights);
  c_bench->add_option("--out", bench_out, "CSV report path");
  add_arch(c_bench, bench.arch);

  ReportOptions rep;
  auto* c_rep = app.add_subcommand("report", "render SVG plots for an evaluation");
  c_rep->add_option("--eval", rep.eval)->required();
  c_rep->add_option("--pred", rep.pred)->required();
  c_rep->add_option("--gt", rep.gt)->required();
  c_rep->add_option("--out", rep.out)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (threads) set_thread_count(*threads);
    if (c_synth->parsed()) {
      std::tie(synth.height, synth.width) = parse_size(synth_size);
      return cmd_synth_scenes(synth, err);
    }
    if (c_sim->parsed()) {
      sim.mode = mode_option(sim_mode);
      if (!camera.empty()) sim.camera_params = camera;
      return cmd_simulate(sim, err);
    }
    if (c_train->parsed() || c_pre->parsed()) {
      train.config.mode = mode_option(train_mode);
      if (!init.empty()) train.init = init;
      if (c_pre->parsed()) train.module = module == "nuc" ? Module::nuc : Module::sr;
      return cmd_train(train, err);
    }
    if (c_pipe->parsed()) {
      pipe.mode = mode_option(pipe_mode);
      pipe.t_amb = tamb_option(pipe_tamb);
      return cmd_pipeline(pipe, err);
    }
    if (c_eval->parsed()) {
      ev.t_amb = tamb_option(eval_tamb);
      if (!mask.empty()) ev.mask = mask;
      return cmd_eval(ev, err);
    }
    if (c_bench->parsed()) {
      std::tie(bench.height, bench.width) = parse_size(bench_size);
      bench.mode = mode_option(bench_mode);
      bench.threads = threads;
      if (!bench_weights.empty()) bench.weights = bench_weights;
      if (!bench_out.empty()) bench.out = bench_out;
      return cmd_bench(bench, out);
    }
    if (c_rep->parsed()) return cmd_report(rep, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace thermo::cli
