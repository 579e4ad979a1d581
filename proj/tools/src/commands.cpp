// Copyright 2026 The clipart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <mutex>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "clipart/image_io.hpp"
#include "clipart/parallel.hpp"
#include "clipart/random.hpp"
#include "stages.hpp"

namespace clipart::cli {

namespace fs = std::filesystem;
using Summary = nlohmann::ordered_json;

namespace {

struct Context {
  PipelineConfig config;
  bool dry_run = false;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  std::mutex log_mu;

  void progress(const std::string& line) {
    std::lock_guard<std::mutex> lock(log_mu);
    *err << line << '\n';
  }
  fs::path output() const { return config.paths.output; }
  void prepare_output() const {
    fs::create_directories(output());
    write_text(output() / "config.json", serialize_config(config));
  }
};

// Validates a configured input path before any stage runs.
fs::path require_path(const std::string& value, const char* field, bool directory = false) {
  if (value.empty()) fail(ErrorCode::kConfigError, std::string("paths.") + field + ": required but not set");
  const fs::path p(value);
  const bool ok = directory ? fs::is_directory(p) : fs::is_regular_file(p);
  if (!ok) {
    fail(ErrorCode::kConfigError, std::string("paths.") + field + ": " + (directory ? "directory" : "file") +
                                      " '" + value + "' does not exist");
  }
  return p;
}

std::optional<fs::path> optional_path(const std::string& value, const char* field, bool directory = false) {
  if (value.empty()) return std::nullopt;
  return require_path(value, field, directory);
}

void check_basis_path(const PipelineConfig& c) { optional_path(c.paths.shape_basis, "shape_basis"); }

Image background_for(const std::optional<fs::path>& path, const std::vector<Image>& frames) {
  if (path) return read_ppm(*path);
  if (frames.empty()) fail(ErrorCode::kInputMissing, "no frames to build a median background from");
  return median_image(frames);
}

void emit(Context& ctx, const Summary& s) { *ctx.out << s.dump() << '\n'; }

int cmd_mine(Context& ctx) {
  const PipelineConfig& c = ctx.config;
  const fs::path det = require_path(c.paths.detections, "detections");
  const DetectionStream stream = in_stage("mine", [&] { return load_detections(det); });
  const std::vector<ObjectTrack> tracks = mine_stage(stream, c);
  std::size_t n_det = 0;
  for (const auto& f : stream.frames) n_det += f.size();
  std::size_t n_kept = 0;
  for (const auto& t : tracks) n_kept += t.frames.size();
  if (!ctx.dry_run) {
    ctx.prepare_output();
    write_text(ctx.output() / "tracks.json", serialize_tracks(tracks, stream.width, stream.height));
  }
  emit(ctx, {{"command", "mine"}, {"dry_run", ctx.dry_run}, {"seed", c.seed}, {"detections", n_det},
             {"unoccluded", n_kept}, {"tracks", tracks.size()}});
  return 0;
}

int cmd_fit(Context& ctx) {
  const PipelineConfig& c = ctx.config;
  const fs::path cal = require_path(c.paths.calibration, "calibration");
  const fs::path trk = require_path(c.paths.tracks, "tracks");
  check_basis_path(c);
  const CameraModel camera = in_stage("fit", [&] { return load_calibration(cal); });
  const ShapeBasis basis = in_stage("fit", [&] { return resolve_basis(c); });
  const std::vector<ObjectTrack> tracks = in_stage("fit", [&] { return parse_tracks(read_text(trk), trk.string()); });
  std::size_t skipped = 0;
  const auto entries = fit_stage(camera, basis, tracks, c, c.resolved_threads(), &skipped);
  if (!ctx.dry_run) {
    ctx.prepare_output();
    write_text(ctx.output() / "reconstructions.json", serialize_reconstructions(entries));
  }
  emit(ctx, {{"command", "fit"}, {"dry_run", ctx.dry_run}, {"seed", c.seed}, {"tracks", tracks.size()},
             {"skipped_tracks", skipped}, {"reconstructions", entries.size()}});
  return 0;
}

int cmd_composite(Context& ctx) {
  const PipelineConfig& c = ctx.config;
  const fs::path cal = require_path(c.paths.calibration, "calibration");
  const fs::path rec = require_path(c.paths.reconstructions, "reconstructions");
  const fs::path det = require_path(c.paths.detections, "detections");
  const fs::path frames_dir = require_path(c.paths.frames, "frames", true);
  const auto bg = optional_path(c.paths.background, "background");
  check_basis_path(c);
  const CameraModel camera = in_stage("composite", [&] { return load_calibration(cal); });
  const ShapeBasis basis = in_stage("composite", [&] { return resolve_basis(c); });
  const DetectionStream stream = in_stage("composite", [&] { return load_detections(det); });
  const auto entries =
      in_stage("composite", [&] { return parse_reconstructions(read_text(rec), rec.string()); });
  const std::vector<Image> frames = load_frames(frames_dir, stream);
  const Image background = background_for(bg, frames);
  const auto pool = in_stage("composite", [&] { return build_pool(camera, basis, entries, stream, frames); });
  if (!ctx.dry_run) ctx.prepare_output();
  const SequenceSummary s = composite_stage(camera, basis, pool, background, frames, std::nullopt, c, c.seed, 0,
                                            ctx.output(), "", !ctx.dry_run);
  if (!ctx.dry_run) write_text(ctx.output() / "index.json", serialize_index(s.annotation_files));
  emit(ctx, {{"command", "composite"}, {"dry_run", ctx.dry_run}, {"seed", c.seed}, {"pool", pool.size()},
             {"scenes", s.scenes}, {"objects", s.objects}});
  return 0;
}

void export_both(const AnnotationFile& file, const fs::path& dir) {
  write_text(dir / "coco_amodal.json", export_coco(file, CocoMaskMode::kAmodal));
  write_text(dir / "coco_modal.json", export_coco(file, CocoMaskMode::kModal));
}

int cmd_export(Context& ctx) {
  const PipelineConfig& c = ctx.config;
  const fs::path ann = require_path(c.paths.annotations, "annotations");
  const AnnotationFile file = in_stage("export", [&] { return load_annotation_set(ann); });
  std::size_t n = 0;
  for (const auto& img : file.images) n += img.objects.size();
  if (!ctx.dry_run) {
    ctx.prepare_output();
    export_both(file, ctx.output());
  }
  emit(ctx, {{"command", "export"}, {"dry_run", ctx.dry_run}, {"seed", c.seed}, {"images", file.images.size()},
             {"annotations", n}});
  return 0;
}

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

// Shortest decimal form that reads back to the same double.
std::string shortest(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

int cmd_eval(Context& ctx, const std::string& pred, const std::string& gt, const std::string& table) {
  if (pred.empty()) fail(ErrorCode::kConfigError, "--pred: required");
  if (gt.empty()) fail(ErrorCode::kConfigError, "--gt: required");
  if (!fs::is_regular_file(pred)) fail(ErrorCode::kConfigError, "--pred: file '" + pred + "' does not exist");
  if (!fs::is_regular_file(gt)) fail(ErrorCode::kConfigError, "--gt: file '" + gt + "' does not exist");
  const EvalPair pair = in_stage("eval", [&] {
    return EvalPair{to_eval_images(load_annotation_set(pred)), to_eval_images(load_annotation_set(gt))};
  });
  const EvalReport r = in_stage("eval", [&] { return evaluate(pair); });
  if (!table.empty() && !ctx.dry_run) {
    std::string tsv = "metric\tbin_lo\tbin_hi\tvalue\tn\n";
    for (BinnedMetric m : {BinnedMetric::kApBox50, BinnedMetric::kApMask50, BinnedMetric::kPck10,
                           BinnedMetric::kMpjpe, BinnedMetric::kAccPi6, BinnedMetric::kAccPi18,
                           BinnedMetric::kMedianRotation}) {
      const auto rows = in_stage("eval", [&] { return binned_curves(pair, ctx.config.bins, m); });
      for (const BinRow& row : rows) {
        const std::string value = row.value ? shortest(*row.value) : "empty";
        tsv += to_string(m) + "\t" + shortest(row.lo) + "\t" + shortest(row.hi) + "\t" + value + "\t" +
               std::to_string(row.n) + "\n";
      }
    }
    fs::create_directories(ctx.output());
    write_text(ctx.output() / table, tsv);
  }
  emit(ctx, {{"command", "eval"},
             {"units", {{"rotation", "radians"}, {"translation", "meters"}, {"mpjpe", "meters"}}},
             {"n_gt", r.n_gt},
             {"n_pred", r.n_pred},
             {"n_matched", r.n_matched},
             {"ap_box_50", r.ap_box_50},
             {"ap_box", r.ap_box},
             {"ap_mask_50", opt(r.ap_mask_50)},
             {"ap_mask", opt(r.ap_mask)},
             {"pck_10", opt(r.pck_10)},
             {"mpjpe", opt(r.mpjpe)},
             {"acc_pi6", opt(r.acc_pi6)},
             {"acc_pi18", opt(r.acc_pi18)},
             {"median_rotation", opt(r.median_rotation)},
             {"median_translation", opt(r.median_translation)},
             {"median_add", opt(r.median_add)}});
  return 0;
}

int cmd_synth(Context& ctx) {
  const PipelineConfig& c = ctx.config;
  check_basis_path(c);
  const ShapeBasis basis = in_stage("synth", [&] { return resolve_basis(c); });
  if (!ctx.dry_run) {
    ctx.prepare_output();
    const auto t0 = std::chrono::steady_clock::now();
    write_corpus(c, basis, ctx.output(), c.resolved_threads());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ctx.progress("[synth] wrote " + std::to_string(c.sequences) + " sequences in " + std::to_string(secs) + " s");
  }
  emit(ctx, {{"command", "synth"}, {"dry_run", ctx.dry_run}, {"seed", c.seed}, {"sequences", c.sequences},
             {"frames_per_sequence", c.synth.n_frames}});
  return 0;
}

struct SequenceSource {
  std::string prefix;
  fs::path calibration;
  fs::path detections;
  fs::path frames;
  std::optional<fs::path> background;
  std::optional<fs::path> ground_truth;
};

SequenceInputs load_sequence(const SequenceSource& src) {
  SequenceInputs in{load_calibration(src.calibration), load_detections(src.detections), Image(), {}, std::nullopt};
  if (in.detections.width != in.camera.width() || in.detections.height != in.camera.height()) {
    fail(ErrorCode::kValidationError, src.detections.string() + ": image size differs from the calibration");
  }
  in.frames = load_frames(src.frames, in.detections);
  in.background = background_for(src.background, in.frames);
  if (src.ground_truth) in.truth = load_ground_truth(*src.ground_truth);
  return in;
}

int cmd_pipeline(Context& ctx) {
  const PipelineConfig& c = ctx.config;
  check_basis_path(c);
  std::vector<SequenceSource> sources;
  fs::path basis_fallback;
  if (!c.paths.corpus.empty()) {
    const fs::path corpus = require_path(c.paths.corpus, "corpus", true);
    const fs::path index = corpus / "index.json";
    if (!fs::is_regular_file(index)) fail(ErrorCode::kInputMissing, "corpus index '" + index.string() + "' missing");
    basis_fallback = corpus / "shape_basis.json";
    const auto docs = in_stage("pipeline", [&] { return parse_index(read_text(index), index.string()); });
    for (std::size_t i = 0; i < docs.size(); ++i) {
      const fs::path dir = corpus / fs::path(docs[i]).parent_path();
      SequenceSource s{numbered("seq", std::int64_t(i)) + "/", dir / "calibration.json", corpus / docs[i],
                       dir / "frames", std::nullopt, std::nullopt};
      for (const fs::path& p : {s.calibration, s.detections}) {
        if (!fs::is_regular_file(p)) fail(ErrorCode::kInputMissing, "'" + p.string() + "' missing");
      }
      if (fs::is_regular_file(dir / "background.ppm")) s.background = dir / "background.ppm";
      if (fs::is_regular_file(dir / "ground_truth.json")) s.ground_truth = dir / "ground_truth.json";
      sources.push_back(std::move(s));
    }
  } else {
    sources.push_back({"", require_path(c.paths.calibration, "calibration"),
                       require_path(c.paths.detections, "detections"), require_path(c.paths.frames, "frames", true),
                       optional_path(c.paths.background, "background"),
                       optional_path(c.paths.ground_truth, "ground_truth")});
  }
  const ShapeBasis basis = in_stage("pipeline", [&] { return resolve_basis(c, basis_fallback); });

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<SequenceSummary> results(sources.size());
  const int threads = c.resolved_threads();
  const bool per_sequence = sources.size() > 1;
  if (!ctx.dry_run) ctx.prepare_output();
  parallel_for(sources.size(), per_sequence ? threads : 1, [&](std::size_t i) {
    const SequenceInputs in = in_stage("load", [&] { return load_sequence(sources[i]); });
    if (ctx.dry_run) return;
    results[i] = run_sequence(in, basis, c, derive_seed(c.seed, i), std::int64_t(i) * 10000, ctx.output(),
                              sources[i].prefix, per_sequence ? 1 : threads, true);
    const SequenceSummary& s = results[i];
    ctx.progress("[pipeline] " + (sources[i].prefix.empty() ? std::string("sequence") : sources[i].prefix) +
                 " tracks=" + std::to_string(s.tracks) + " skipped=" + std::to_string(s.skipped_tracks) +
                 " reconstructions=" + std::to_string(s.reconstructions) + " scenes=" + std::to_string(s.scenes));
  });

  Summary summary = {{"command", "pipeline"}, {"dry_run", ctx.dry_run}, {"seed", c.seed},
                     {"sequences", sources.size()}};
  if (!ctx.dry_run) {
    std::vector<std::string> docs;
    std::vector<std::string> refs;
    std::size_t tracks = 0, skipped = 0, recs = 0, scenes = 0, objects = 0;
    for (const SequenceSummary& s : results) {
      docs.insert(docs.end(), s.annotation_files.begin(), s.annotation_files.end());
      refs.insert(refs.end(), s.reference_files.begin(), s.reference_files.end());
      tracks += s.tracks;
      skipped += s.skipped_tracks;
      recs += s.reconstructions;
      scenes += s.scenes;
      objects += s.objects;
    }
    write_text(ctx.output() / "index.json", serialize_index(docs));
    if (!refs.empty()) write_text(ctx.output() / "reference_index.json", serialize_index(refs));
    in_stage("export", [&] { export_both(load_annotation_set(ctx.output() / "index.json"), ctx.output()); });
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ctx.progress("[pipeline] done in " + std::to_string(secs) + " s");
    summary["tracks"] = tracks;
    summary["skipped_tracks"] = skipped;
    summary["reconstructions"] = recs;
    summary["scenes"] = scenes;
    summary["objects"] = objects;
    summary["index"] = (ctx.output() / "index.json").string();
    if (!refs.empty()) summary["reference_index"] = (ctx.output() / "reference_index.json").string();
  }
  emit(ctx, summary);
  return 0;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigError: return 2;
    case ErrorCode::kInputMissing: return 3;
    default: return 1;
  }
}

void error_line(std::ostream& err, const std::string& code, const std::string& message) {
  err << nlohmann::ordered_json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

void write_corpus(const PipelineConfig& config, const ShapeBasis& basis, const fs::path& root, int threads) {
  fs::create_directories(root);
  save_basis(basis, root / "shape_basis.json");
  std::vector<std::string> docs(std::size_t(config.sequences));
  parallel_for(docs.size(), threads, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(config.seed, i);
    const SyntheticScene scene = in_stage("synth", [&] { return generate_scene(seed, config.synth, basis); });
    const DetectionStream stream = corrupt(scene, config.noise, derive_seed(seed, 1));
    const std::string name = numbered("seq", std::int64_t(i));
    const fs::path dir = root / name;
    fs::create_directories(dir / "frames");
    save_calibration(scene.camera, dir / "calibration.json");
    write_ppm(scene.background, dir / "background.ppm");
    for (std::size_t f = 0; f < scene.frames.size(); ++f) {
      write_ppm(scene.frames[f], frame_path(dir / "frames", stream.frame_ids[f]));
    }
    save_detections(stream, dir / "detections.json");
    save_ground_truth(scene.truth, dir / "ground_truth.json");
    docs[i] = name + "/detections.json";
  });
  write_text(root / "index.json", serialize_index(docs));
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Clip-art pseudo-ground-truth generation from stationary-camera detections"};
  app.name("clipart");
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string output;
  int threads = 0;
  bool dry_run = false;
  bool print_config = false;
  auto* o_seed = app.add_option("--seed", seed, "Master seed");
  auto* o_output = app.add_option("--output", output, "Output directory");
  auto* o_threads = app.add_option("--threads", threads, "Worker threads (0: all cores)");
  app.add_option("--config", config_path, "Pipeline config (JSON)");
  app.add_flag("--dry-run", dry_run, "Validate inputs without writing");
  app.add_flag("--print-config", print_config, "Print the resolved config and exit");

  // Per-subcommand overrides of config keys.
  std::string calibration, basis, detections, tracks, reconstructions, background, frames, ground_truth,
      annotations, corpus, classifier, strip_mode, pred, gt, bins_table;
  double delta = 0.0, noise_sigma = 0.0, dropout = 0.0;
  int scenes = 0, n_frames = 0;
  auto str = [&](CLI::App* sub, const char* flag, std::string& v, const char* help) {
    sub->add_option(flag, v, help);
  };

  CLI::App* mine = app.add_subcommand("mine", "Track detections and keep unoccluded frames");
  str(mine, "--detections", detections, "Detection stream");
  str(mine, "--classifier", classifier, "heuristic or ground_truth");
  str(mine, "--strip-mode", strip_mode, "iou or intersection_over_strip");
  auto* o_delta = mine->add_option("--delta", delta, "Bottom-strip overlap threshold");

  CLI::App* fit = app.add_subcommand("fit", "Recover pose and shape of mined tracks");
  str(fit, "--calibration", calibration, "Camera calibration");
  str(fit, "--basis", basis, "Shape basis");
  str(fit, "--tracks", tracks, "Tracks from mine");

  CLI::App* comp = app.add_subcommand("composite", "Paint reconstructed objects into clip-art scenes");
  str(comp, "--calibration", calibration, "Camera calibration");
  str(comp, "--basis", basis, "Shape basis");
  str(comp, "--reconstructions", reconstructions, "Reconstructions from fit");
  str(comp, "--detections", detections, "Detection stream (frame list)");
  str(comp, "--frames", frames, "Directory of frame images");
  str(comp, "--background", background, "Background image");
  auto* o_comp_scenes = comp->add_option("--scenes", scenes, "Scenes to generate");

  CLI::App* exp = app.add_subcommand("export", "Write COCO-style amodal and modal documents");
  str(exp, "--annotations", annotations, "Annotation file or index");

  CLI::App* ev = app.add_subcommand("eval", "Compare predicted annotations against ground truth");
  str(ev, "--pred", pred, "Predicted annotation file or index");
  str(ev, "--gt", gt, "Ground-truth annotation file or index");
  str(ev, "--bins-table", bins_table, "Per-bin table file name under the output directory");

  CLI::App* syn = app.add_subcommand("synth", "Generate a synthetic corpus");
  auto* o_syn_scenes = syn->add_option("--scenes", scenes, "Number of sequences");
  auto* o_syn_frames = syn->add_option("--frames", n_frames, "Frames per sequence");
  auto* o_sigma = syn->add_option("--noise-sigma", noise_sigma, "Keypoint noise (px)");
  auto* o_dropout = syn->add_option("--dropout", dropout, "Keypoint dropout probability");
  str(syn, "--basis", basis, "Shape basis");

  CLI::App* pipe = app.add_subcommand("pipeline", "mine, fit, composite and export");
  str(pipe, "--corpus", corpus, "Synthetic corpus directory");
  str(pipe, "--calibration", calibration, "Camera calibration");
  str(pipe, "--basis", basis, "Shape basis");
  str(pipe, "--detections", detections, "Detection stream");
  str(pipe, "--frames", frames, "Directory of frame images");
  str(pipe, "--background", background, "Background image");
  str(pipe, "--ground-truth", ground_truth, "Ground truth for reference annotations");
  str(pipe, "--classifier", classifier, "heuristic or ground_truth");
  auto* o_pipe_scenes = pipe->add_option("--scenes", scenes, "Scenes per sequence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    error_line(err, "ConfigError", e.what());
    return 2;
  }

  Context ctx;
  ctx.out = &out;
  ctx.err = &err;
  ctx.dry_run = dry_run;
  try {
    PipelineConfig& c = ctx.config;
    if (!config_path.empty()) c = load_config(config_path);
    if (o_seed->count()) c.seed = seed;
    if (o_output->count()) c.paths.output = output;
    if (o_threads->count()) {
      if (threads < 0) fail(ErrorCode::kConfigError, "--threads: must be non-negative");
      c.threads = threads;
    }
    auto take = [](const std::string& v, std::string& field) {
      if (!v.empty()) field = v;
    };
    take(calibration, c.paths.calibration);
    take(basis, c.paths.shape_basis);
    take(detections, c.paths.detections);
    take(tracks, c.paths.tracks);
    take(reconstructions, c.paths.reconstructions);
    take(background, c.paths.background);
    take(frames, c.paths.frames);
    take(ground_truth, c.paths.ground_truth);
    take(annotations, c.paths.annotations);
    take(corpus, c.paths.corpus);
    // Re-run the schema checks on the merged values.
    nlohmann::json merged = nlohmann::json::parse(serialize_config(c));
    if (!classifier.empty()) merged["mining"]["classifier"] = classifier;
    if (!strip_mode.empty()) merged["mining"]["strip_mode"] = strip_mode;
    if (o_delta->count()) merged["mining"]["delta"] = delta;
    if (o_comp_scenes->count() || o_pipe_scenes->count()) merged["scene"]["scenes_per_sequence"] = scenes;
    if (o_syn_scenes->count()) merged["synth"]["sequences"] = scenes;
    if (o_syn_frames->count()) merged["synth"]["frames"] = n_frames;
    if (o_sigma->count()) merged["synth"]["noise"]["keypoint_sigma_px"] = noise_sigma;
    if (o_dropout->count()) merged["synth"]["noise"]["dropout"] = dropout;
    c = parse_config(merged.dump(), "command line");

    if (print_config) {
      out << serialize_config(c);
      return 0;
    }
    if (mine->parsed()) return cmd_mine(ctx);
    if (fit->parsed()) return cmd_fit(ctx);
    if (comp->parsed()) return cmd_composite(ctx);
    if (exp->parsed()) return cmd_export(ctx);
    if (ev->parsed()) return cmd_eval(ctx, pred, gt, bins_table);
    if (syn->parsed()) return cmd_synth(ctx);
    if (pipe->parsed()) return cmd_pipeline(ctx);
    fail(ErrorCode::kConfigError, "no subcommand given (mine, fit, composite, export, eval, synth, pipeline)");
  } catch (const Error& e) {
    error_line(err, std::string(to_string(e.code())), e.what());
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    error_line(err, "IoError", e.what());
    return 1;
  } catch (const std::exception& e) {
    error_line(err, "InternalError", e.what());
    return 1;
  }
}

}  // namespace clipart::cli
