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

#include "clipart_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "clipart/error.hpp"
#include "clipart/parallel.hpp"

namespace clipart::cli {

namespace {

using Json = nlohmann::json;
using Ordered = nlohmann::ordered_json;

[[noreturn]] void config_fail(const std::string& source, const std::string& path, const std::string& msg) {
  fail(ErrorCode::kConfigError, source + ": " + path + ": " + msg);
}

// Object view that remembers which keys were consumed so leftovers can be
// reported as unknown.
class Section {
 public:
  Section(const Json& node, std::string source, std::string path)
      : node_(&node), source_(std::move(source)), path_(std::move(path)) {
    if (!node.is_object()) config_fail(source_, path_, "expected an object");
  }

  Section child(const char* key) {
    static const Json kEmpty = Json::object();
    const Json* v = find(key);
    return Section(v ? *v : kEmpty, source_, path_ + "." + key);
  }

  void number(const char* key, double& out, double lo, double hi) {
    if (const Json* v = find(key)) {
      if (!v->is_number()) fail_at(key, "expected a number");
      const double x = v->get<double>();
      if (!std::isfinite(x) || x < lo || x > hi) {
        std::ostringstream os;
        os << "value " << x << " outside [" << lo << ", " << hi << "]";
        fail_at(key, os.str());
      }
      out = x;
    }
  }

  void integer(const char* key, int& out, std::int64_t lo, std::int64_t hi) {
    if (const Json* v = find(key)) {
      if (!v->is_number_integer()) fail_at(key, "expected an integer");
      const auto x = v->get<std::int64_t>();
      if (x < lo || x > hi) {
        fail_at(key, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
      }
      out = int(x);
    }
  }

  void unsigned64(const char* key, std::uint64_t& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_unsigned()) fail_at(key, "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }

  void boolean(const char* key, bool& out) {
    if (const Json* v = find(key)) {
      if (!v->is_boolean()) fail_at(key, "expected true or false");
      out = v->get<bool>();
    }
  }

  void string(const char* key, std::string& out) {
    if (const Json* v = find(key)) {
      if (!v->is_string()) fail_at(key, "expected a string");
      out = v->get<std::string>();
    }
  }

  std::optional<std::vector<double>> numbers(const char* key) {
    const Json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_array()) fail_at(key, "expected an array of numbers");
    std::vector<double> out;
    for (const Json& e : *v) {
      if (!e.is_number()) fail_at(key, "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  void finish() const {
    for (auto it = node_->begin(); it != node_->end(); ++it) {
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) {
        config_fail(source_, path_ + "." + it.key(), "unknown key");
      }
    }
  }

  [[noreturn]] void fail_at(const std::string& key, const std::string& msg) const {
    config_fail(source_, path_ + "." + key, msg);
  }

 private:
  const Json* find(const char* key) {
    seen_.emplace_back(key);
    const auto it = node_->find(key);
    return it == node_->end() ? nullptr : &*it;
  }

  const Json* node_;
  std::string source_;
  std::string path_;
  std::vector<std::string> seen_;
};

constexpr const char* kConfigVersion = "clipart-pipeline-config/1";
constexpr double kBig = 1e12;

std::string strip_mode_name(StripOverlapMode m) {
  return m == StripOverlapMode::kIoU ? "iou" : "intersection_over_strip";
}

std::string classifier_name(ClassifierKind k) {
  return k == ClassifierKind::kHeuristic ? "heuristic" : "ground_truth";
}

// Re-raises a module-level validation failure as a field-less config error.
template <typename Fn>
void revalidate(const std::string& source, const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    config_fail(source, path, e.what());
  }
}

}  // namespace

int PipelineConfig::resolved_threads() const { return threads > 0 ? threads : default_thread_count(); }

PipelineConfig parse_config(const std::string& text, const std::string& source) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorCode::kConfigError, source + ": malformed JSON: " + e.what());
  }
  PipelineConfig c;
  Section root(doc, source, "$");
  std::string version = kConfigVersion;
  root.string("version", version);
  if (version != kConfigVersion) root.fail_at("version", "expected '" + std::string(kConfigVersion) + "'");
  root.unsigned64("seed", c.seed);
  root.integer("threads", c.threads, 0, 1024);

  Section paths = root.child("paths");
  paths.string("calibration", c.paths.calibration);
  paths.string("shape_basis", c.paths.shape_basis);
  paths.string("detections", c.paths.detections);
  paths.string("tracks", c.paths.tracks);
  paths.string("reconstructions", c.paths.reconstructions);
  paths.string("background", c.paths.background);
  paths.string("frames", c.paths.frames);
  paths.string("ground_truth", c.paths.ground_truth);
  paths.string("annotations", c.paths.annotations);
  paths.string("corpus", c.paths.corpus);
  paths.string("output", c.paths.output);
  if (c.paths.output.empty()) paths.fail_at("output", "must not be empty");
  paths.finish();

  Section mining = root.child("mining");
  std::string classifier = classifier_name(c.mining.classifier);
  mining.string("classifier", classifier);
  if (classifier == "heuristic") {
    c.mining.classifier = ClassifierKind::kHeuristic;
  } else if (classifier == "ground_truth") {
    c.mining.classifier = ClassifierKind::kGroundTruth;
  } else {
    mining.fail_at("classifier", "expected 'heuristic' or 'ground_truth'");
  }
  mining.number("delta", c.mining.heuristic.delta, 0.0, 1.0);
  mining.number("strip_fraction", c.mining.heuristic.strip_fraction, 1e-6, 1.0);
  mining.number("border_margin_px", c.mining.heuristic.border_margin_px, 0.0, kBig);
  std::string mode = strip_mode_name(c.mining.heuristic.mode);
  mining.string("strip_mode", mode);
  if (mode == "iou") {
    c.mining.heuristic.mode = StripOverlapMode::kIoU;
  } else if (mode == "intersection_over_strip") {
    c.mining.heuristic.mode = StripOverlapMode::kIntersectionOverStrip;
  } else {
    mining.fail_at("strip_mode", "expected 'iou' or 'intersection_over_strip'");
  }
  mining.number("tracker_iou_gate", c.mining.tracker.iou_gate, 0.0, 1.0);
  mining.integer("tracker_max_age", c.mining.tracker.max_age, 0, 1 << 20);
  mining.finish();

  Section fit = root.child("fit");
  fit.integer("max_iterations", c.fit.max_iterations, 1, 1 << 20);
  fit.number("relative_cost_tolerance", c.fit.relative_cost_tolerance, 0.0, 1.0);
  fit.number("step_tolerance", c.fit.step_tolerance, 0.0, 1.0);
  fit.number("ground_weight", c.fit.ground_weight, 0.0, kBig);
  fit.number("shape_prior_weight", c.fit.shape_prior_weight, 0.0, kBig);
  fit.integer("min_keypoints", c.fit.min_keypoints, 4, 1 << 20);
  fit.integer("max_noise_rounds", c.fit.max_noise_rounds, 1, 1000);
  fit.number("inlier_threshold_px", c.fit.inlier_threshold_px, 0.0, kBig);
  fit.number("person_height", c.person_height, 1e-3, 10.0);
  fit.finish();

  Section scene = root.child("scene");
  scene.integer("min_objects", c.scene.min_objects, 0, 1 << 20);
  scene.integer("max_objects", c.scene.max_objects, 0, 1 << 20);
  scene.number("min_depth", c.scene.min_depth, 0.0, kBig);
  scene.number("max_depth", c.scene.max_depth, 0.0, kBig);
  scene.integer("feather_px", c.scene.feather_px, 0, 64);
  scene.boolean("allow_person", c.scene.allow_person);
  scene.boolean("allow_car", c.scene.allow_car);
  scene.integer("scenes_per_sequence", c.scenes_per_sequence, 0, 1 << 16);
  scene.finish();
  revalidate(source, "$.scene", [&] { c.scene.validate(); });

  Section metrics = root.child("metrics");
  if (auto edges = metrics.numbers("bins")) c.bins.edges = *edges;
  metrics.finish();
  revalidate(source, "$.metrics.bins", [&] { c.bins.validate(); });

  Section synth = root.child("synth");
  SynthSpec& s = c.synth;
  synth.integer("sequences", c.sequences, 1, 1 << 16);
  synth.integer("width", s.width, 1, 1 << 15);
  synth.integer("height", s.height, 1, 1 << 15);
  synth.integer("frames", s.n_frames, 1, 1 << 16);
  synth.integer("min_objects", s.min_objects, 1, 1 << 10);
  synth.integer("max_objects", s.max_objects, 1, 1 << 10);
  synth.number("person_probability", s.person_probability, 0.0, 1.0);
  synth.number("min_depth", s.min_depth, 0.0, kBig);
  synth.number("max_depth", s.max_depth, 0.0, kBig);
  synth.number("min_camera_height", s.min_camera_height, 0.0, kBig);
  synth.number("max_camera_height", s.max_camera_height, 0.0, kBig);
  synth.number("min_pitch_deg", s.min_pitch_deg, 0.0, 90.0);
  synth.number("max_pitch_deg", s.max_pitch_deg, 0.0, 90.0);
  synth.number("max_roll_deg", s.max_roll_deg, 0.0, 90.0);
  synth.number("min_focal", s.min_focal, 0.0, kBig);
  synth.number("max_focal", s.max_focal, 0.0, kBig);
  synth.number("max_car_speed", s.max_car_speed, 0.0, kBig);
  synth.number("max_person_speed", s.max_person_speed, 0.0, kBig);
  synth.number("edge_margin_px", s.edge_margin_px, 0.0, kBig);
  synth.integer("min_mask_pixels", s.min_mask_pixels, 0, 1 << 30);
  synth.integer("max_attempts", s.max_attempts, 1, 1 << 30);
  Section noise = synth.child("noise");
  noise.number("keypoint_sigma_px", c.noise.keypoint_sigma_px, 0.0, kBig);
  noise.integer("mask_jitter_px", c.noise.mask_jitter_px, 0, 64);
  noise.number("dropout", c.noise.dropout, 0.0, 1.0);
  noise.finish();
  synth.finish();
  revalidate(source, "$.synth", [&] { s.validate(); });

  root.finish();
  return c;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kConfigError, "--config: cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string serialize_config(const PipelineConfig& c) {
  Ordered doc;
  doc["version"] = kConfigVersion;
  doc["seed"] = c.seed;
  doc["threads"] = c.threads;
  doc["paths"] = {{"calibration", c.paths.calibration},
                  {"shape_basis", c.paths.shape_basis},
                  {"detections", c.paths.detections},
                  {"tracks", c.paths.tracks},
                  {"reconstructions", c.paths.reconstructions},
                  {"background", c.paths.background},
                  {"frames", c.paths.frames},
                  {"ground_truth", c.paths.ground_truth},
                  {"annotations", c.paths.annotations},
                  {"corpus", c.paths.corpus},
                  {"output", c.paths.output}};
  doc["mining"] = {{"classifier", classifier_name(c.mining.classifier)},
                   {"delta", c.mining.heuristic.delta},
                   {"strip_fraction", c.mining.heuristic.strip_fraction},
                   {"border_margin_px", c.mining.heuristic.border_margin_px},
                   {"strip_mode", strip_mode_name(c.mining.heuristic.mode)},
                   {"tracker_iou_gate", c.mining.tracker.iou_gate},
                   {"tracker_max_age", c.mining.tracker.max_age}};
  doc["fit"] = {{"max_iterations", c.fit.max_iterations},
                {"relative_cost_tolerance", c.fit.relative_cost_tolerance},
                {"step_tolerance", c.fit.step_tolerance},
                {"ground_weight", c.fit.ground_weight},
                {"shape_prior_weight", c.fit.shape_prior_weight},
                {"min_keypoints", c.fit.min_keypoints},
                {"max_noise_rounds", c.fit.max_noise_rounds},
                {"inlier_threshold_px", c.fit.inlier_threshold_px},
                {"person_height", c.person_height}};
  doc["scene"] = {{"min_objects", c.scene.min_objects},
                  {"max_objects", c.scene.max_objects},
                  {"min_depth", c.scene.min_depth},
                  {"max_depth", c.scene.max_depth},
                  {"feather_px", c.scene.feather_px},
                  {"allow_person", c.scene.allow_person},
                  {"allow_car", c.scene.allow_car},
                  {"scenes_per_sequence", c.scenes_per_sequence}};
  doc["metrics"] = {{"bins", c.bins.edges}};
  const SynthSpec& s = c.synth;
  doc["synth"] = {{"sequences", c.sequences},
                  {"width", s.width},
                  {"height", s.height},
                  {"frames", s.n_frames},
                  {"min_objects", s.min_objects},
                  {"max_objects", s.max_objects},
                  {"person_probability", s.person_probability},
                  {"min_depth", s.min_depth},
                  {"max_depth", s.max_depth},
                  {"min_camera_height", s.min_camera_height},
                  {"max_camera_height", s.max_camera_height},
                  {"min_pitch_deg", s.min_pitch_deg},
                  {"max_pitch_deg", s.max_pitch_deg},
                  {"max_roll_deg", s.max_roll_deg},
                  {"min_focal", s.min_focal},
                  {"max_focal", s.max_focal},
                  {"max_car_speed", s.max_car_speed},
                  {"max_person_speed", s.max_person_speed},
                  {"edge_margin_px", s.edge_margin_px},
                  {"min_mask_pixels", s.min_mask_pixels},
                  {"max_attempts", s.max_attempts},
                  {"noise",
                   {{"keypoint_sigma_px", c.noise.keypoint_sigma_px},
                    {"mask_jitter_px", c.noise.mask_jitter_px},
                    {"dropout", c.noise.dropout}}}};
  return doc.dump(2) + "\n";
}

}  // namespace clipart::cli
