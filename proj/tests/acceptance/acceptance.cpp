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

// Acceptance run: one PASS/FAIL line per criterion with the measured values.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "../oracles/fuzz.hpp"
#include "../oracles/oracles.hpp"
#include "../oracles/zbuffer.hpp"
#include "../unit/metric_instances.hpp"
#include "../unit/support.hpp"
#include "clipart/compositor.hpp"
#include "clipart/dataset_io.hpp"
#include "clipart/error.hpp"
#include "clipart/metrics.hpp"
#include "clipart/mining.hpp"
#include "clipart/pose_fit.hpp"
#include "clipart/rle.hpp"
#include "clipart/synth.hpp"
#include "clipart_cli/commands.hpp"
#include "json.hpp"

using namespace clipart;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rot_err(const RigidPose& a, const RigidPose& b) {
  return rotation_angle(a.rotation_matrix(), b.rotation_matrix());
}

SynthSpec single_vehicle(int frames) {
  SynthSpec spec;
  spec.n_frames = frames;
  spec.min_objects = 1;
  spec.max_objects = 1;
  spec.person_probability = 0.0;
  return spec;
}

// AC1: exact keypoints over five frames.
Outcome pose_noise_free(const ShapeBasis& basis) {
  const SynthSpec spec = single_vehicle(5);
  double max_rot = 0, max_trans = 0, max_alpha = 0, fit_time = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SyntheticScene scene = generate_scene(seed, spec, basis);
    ObjectTrack track;
    std::vector<const GroundTruthObjectState*> truth;
    for (const GroundTruthFrame& f : scene.truth.frames) {
      truth.push_back(&f.objects.at(0));
      TrackFrame tf;
      tf.frame_id = f.frame_id;
      tf.keypoints = truth.back()->keypoints;
      track.frames.push_back(tf);
    }
    const auto t0 = Clock::now();
    const TrackFit fit = fit_track(scene.camera, basis, track);
    fit_time += seconds_since(t0);
    for (std::size_t f = 0; f < truth.size(); ++f) {
      max_rot = std::max(max_rot, rot_err(fit.frames[f].pose, truth[f]->pose));
      max_trans = std::max(max_trans, (fit.frames[f].pose.translation() - truth[f]->pose.translation()).norm());
      max_alpha = std::max(max_alpha, (fit.frames[f].coeffs.alpha - truth[f]->coeffs.alpha).norm());
    }
  }
  return {max_rot < 1e-4 && max_trans < 1e-3 && max_alpha < 1e-6 && fit_time < 60.0,
          fmt("100 tracks x 5 frames: max rotation %.3g rad, max translation %.3g m, max alpha %.3g, fit time %.2f s",
              max_rot, max_trans, max_alpha, fit_time)};
}

// AC2: sigma 1 px keypoint noise, one frame per fit.
Outcome pose_noisy(const ShapeBasis& basis) {
  const SynthSpec spec = single_vehicle(1);
  NoiseSpec noise;
  noise.keypoint_sigma_px = 1.0;
  std::vector<double> errors;
  for (std::uint64_t seed = 1000; errors.size() < 200; ++seed) {
    const SyntheticScene scene = generate_scene(seed, spec, basis);
    const DetectionStream stream = corrupt(scene, noise, seed);
    const Detection& d = stream.frames.at(0).at(0);
    ObjectTrack track;
    TrackFrame tf;
    tf.frame_id = d.frame_id;
    tf.keypoints = d.keypoints.value();
    track.frames.push_back(tf);
    const TrackFit fit = fit_track(scene.camera, basis, track);
    errors.push_back(rot_err(fit.frames[0].pose, scene.truth.frames[0].objects.at(0).pose));
  }
  const double med = median(errors);
  const double acc = accuracy_at(errors, M_PI / 6);
  const double limit = 5.0 * M_PI / 180.0;
  return {med < limit && acc >= 0.95,
          fmt("200 fits: median rotation %.3f deg, Acc-pi/6 %.3f, max rotation %.2f deg", med * 180 / M_PI, acc,
              *std::max_element(errors.begin(), errors.end()) * 180 / M_PI)};
}

// AC3: ground depth against LU ray-plane intersection.
Outcome ground_plane_depth() {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> f(300, 2000), tilt(-0.6, 0.6), off(0.5, 20), uu(0, 1);
  int matched = 0, behind = 0, mismatched = 0, parallel = 0, parallel_raised = 0;
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    const int w = 320 + int(gen() % 1600), h = 240 + int(gen() % 1200);
    const Mat3 K = testing_support::intrinsics(f(gen), w * (0.4 + 0.2 * uu(gen)), h * (0.4 + 0.2 * uu(gen)));
    const Vec3 n = Vec3(tilt(gen), 1.0, tilt(gen)).normalized();
    const double d = -off(gen);
    const CameraModel cam = CameraModel::create(K, n, d, w, h);
    const double u = w * uu(gen), v = h * uu(gen);
    const auto want = oracle::ray_plane_depth(K, n, d, u, v);
    try {
      const double got = ground_depth(cam, {u, v});
      if (!want || *want <= 0) {
        ++mismatched;
        continue;
      }
      const double rel = std::abs(got - *want) / *want;
      worst = std::max(worst, rel);
      rel <= 1e-9 ? ++matched : ++mismatched;
    } catch (const Error& e) {
      // Above the horizon the intersection is behind the camera.
      (e.code() == ErrorCode::kPointBehindCamera && want && *want <= 0) ? ++behind : ++mismatched;
    }
    // Horizon pixel in the same column: the ray is parallel to the plane.
    // Level cameras with integer principal points make n^T r exactly zero.
    const Mat3 Kl = testing_support::intrinsics(f(gen), double(w / 2), double(h / 2));
    const CameraModel level = CameraModel::create(Kl, Vec3::UnitY(), d, w, h);
    ++parallel;
    try {
      ground_depth(level, {u, double(h / 2)});
    } catch (const Error& e) {
      parallel_raised += e.code() == ErrorCode::kRayParallelToPlane;
    }
  }
  return {mismatched == 0 && matched > 0 && parallel_raised == parallel,
          fmt("10000 pairs: %d within tolerance (worst rel %.3g), %d behind camera, %d mismatched; "
              "parallel rays raised %d/%d",
              matched, worst, behind, mismatched, parallel_raised, parallel)};
}

// AC4: painter order against a per-pixel z-buffer.
Outcome compositor(const ShapeBasis& basis) {
  int scenes = 0, objects = 0, occluded = 0, mask_diff = 0, not_subset = 0, fraction_diff = 0, repeat_diff = 0;
  for (std::uint64_t seed = 0; scenes < 50; ++seed) {
    const auto sp = testing_support::scene_pool(seed, basis);
    SceneConfig cfg;
    cfg.seed = seed;
    cfg.min_objects = 2;
    cfg.max_objects = 6;
    const auto chosen = sample_nonintersecting(sp.pool, sp.scene.camera, cfg);
    if (chosen.size() < 2) continue;
    ++scenes;
    const ClipArtRecord a = composite(sp.scene.background, chosen, sp.scene.camera, basis, cfg);
    const ClipArtRecord b = composite(sp.scene.background, chosen, sp.scene.camera, basis, cfg);
    const auto want = oracle::zbuffer_modal(chosen, sp.scene.camera, basis);
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      const CompositeObject& o = a.objects[i];
      ++objects;
      occluded += o.occlusion_fraction > 0;
      mask_diff += !(o.modal_mask == want[i]);
      not_subset += !o.modal_mask.is_subset_of(o.amodal_mask);
      fraction_diff += o.occlusion_fraction != 1.0 - double(o.modal_mask.count()) / double(o.amodal_mask.count());
      repeat_diff += !(o.modal_mask == b.objects[i].modal_mask) || !(o.amodal_mask == b.objects[i].amodal_mask) ||
                     o.occlusion_fraction != b.objects[i].occlusion_fraction;
    }
    repeat_diff += !(a.image == b.image) || !(a.depth_map == b.depth_map) || a.paint_order != b.paint_order;
  }
  return {mask_diff == 0 && not_subset == 0 && fraction_diff == 0 && repeat_diff == 0,
          fmt("50 scenes, %d objects (%d occluded): %d modal masks differ from z-buffer, %d not within amodal, "
              "%d occlusion fractions off, %d repeat differences",
              objects, occluded, mask_diff, not_subset, fraction_diff, repeat_diff)};
}

// AC5: analytic Jacobian against central differences.
Outcome jacobian(const ShapeBasis& basis) {
  const CameraModel cam = testing_support::street_camera();
  std::mt19937_64 gen(5);
  std::normal_distribution<double> g(0, 1);
  double worst = 0;
  int columns = 0;
  for (int t = 0; t < 50; ++t) {
    const int frames = 1 + t % 3;
    ShapePoseProblem::State s;
    std::vector<Keypoints2D> obs;
    for (int f = 0; f < frames; ++f) {
      const RigidPose p = testing_support::ground_pose(cam, Vec2(3 * g(gen), 20 + 3 * g(gen)), g(gen));
      s.poses.push_back(RigidPose::from_matrix(exp_so3(0.1 * Vec3(g(gen), g(gen), g(gen))) * p.rotation_matrix(),
                                               p.translation() + 0.3 * Vec3(g(gen), g(gen), g(gen))));
      Keypoints2D kp = testing_support::project_all(cam, p, basis.mean());
      for (int i = 0; i < kp.size(); ++i) kp.points.row(i) += 2.0 * Eigen::RowVector2d(g(gen), g(gen));
      kp.visibility[std::size_t(t % kp.size())] = Visibility::kSelfOccluded;
      obs.push_back(kp);
    }
    s.alpha = ShapeCoefficients::zeros(basis.num_components()).alpha;
    for (int k = 0; k < basis.num_components(); ++k) s.alpha(k) = 1.5 * g(gen) * basis.scales()(k);
    const ShapePoseProblem problem(cam, basis, obs, 1e3, 0.7);
    Eigen::VectorXd r0;
    Eigen::MatrixXd J;
    if (!problem.linearize(s, &r0, &J)) return {false, fmt("state %d: linearization failed", t)};
    const int np = problem.num_parameters();
    const double h = 1e-6;
    for (int j = 0; j < np; ++j) {
      Eigen::VectorXd d = Eigen::VectorXd::Zero(np);
      d(j) = h;
      Eigen::VectorXd rp, rm;
      if (!problem.residuals(problem.retract(s, d, false), &rp) || !problem.residuals(problem.retract(s, -d, false), &rm)) {
        return {false, fmt("state %d: residuals failed", t)};
      }
      const Eigen::VectorXd fd = (rp - rm) / (2 * h);
      worst = std::max(worst, (fd - J.col(j)).norm() / std::max(1.0, J.col(j).norm()));
      ++columns;
    }
  }
  return {worst < 1e-4, fmt("50 states, %d columns: worst relative difference %.3g", columns, worst)};
}

// Rotation angle through the quaternion of the relative rotation.
double quaternion_angle(const Mat3& a, const Mat3& b) {
  const Eigen::Quaterniond q(a.transpose() * b);
  return 2.0 * std::atan2(q.vec().norm(), std::abs(q.w()));
}

// AC6: metrics against brute-force recomputation.
Outcome metric_oracles() {
  std::mt19937_64 gen(6);
  std::normal_distribution<double> n(0, 1);
  double ap_dev = 0, pck_dev = 0, mpjpe_dev = 0, acc_dev = 0, add_dev = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto in = testing_support::random_instance(gen);
    for (double thr : {0.5, 0.75}) {
      ap_dev = std::max(ap_dev, std::abs(average_precision(in.pair, thr, IouMode::kBox) - oracle::ap(in.preds, in.gts, thr)));
    }
  }
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + int(gen() % 6);
    Keypoints2D gt;
    gt.points.resize(k, 2);
    PointMatrix2 pred(k, 2);
    for (int i = 0; i < k; ++i) {
      gt.points.row(i) << 50 + 10 * n(gen), 50 + 10 * n(gen);
      pred.row(i) = gt.points.row(i) + 4.0 * Eigen::RowVector2d(n(gen), n(gen));
      gt.visibility.push_back(i == 0 || gen() % 3 ? Visibility::kVisible : Visibility::kMissing);
      gt.confidence.push_back(1.0);
    }
    const Box box{10, 20, 50 + double(gen() % 40), 80};
    const double r = 0.1 * std::max(box.x1 - box.x0, box.y1 - box.y0);
    int ok = 0, total = 0;
    for (int i = 0; i < k; ++i) {
      if (gt.visibility[std::size_t(i)] == Visibility::kMissing) continue;
      ++total;
      ok += std::hypot(pred(i, 0) - gt.points(i, 0), pred(i, 1) - gt.points(i, 1)) <= r;
    }
    pck_dev = std::max(pck_dev, std::abs(pck(pred, gt, box, 0.1) - double(ok) / total));
  }
  for (int trial = 0; trial < 100; ++trial) {
    const int j = 1 + int(gen() % 5);
    PointMatrix3 a(j, 3), b(j, 3);
    for (int r = 0; r < j; ++r)
      for (int c = 0; c < 3; ++c) a(r, c) = n(gen), b(r, c) = n(gen);
    const int root = int(gen() % std::uint64_t(j));
    double s = 0;
    for (int r = 0; r < j; ++r) s += ((a.row(r) - a.row(root)) - (b.row(r) - b.row(root))).norm();
    mpjpe_dev = std::max(mpjpe_dev, std::abs(mpjpe(a, b, root) - s / j));
  }
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + int(gen() % 5);
    std::vector<double> errors;
    int below = 0;
    for (int i = 0; i < m; ++i) {
      const Mat3 R = oracle::random_rotation(gen);
      const Mat3 Rp = exp_so3(Vec3(n(gen), n(gen), n(gen)) * 0.4) * R;
      const RigidPose gt = RigidPose::from_matrix(R, Vec3::Zero()), pred = RigidPose::from_matrix(Rp, Vec3::Zero());
      errors.push_back(pose_accuracy(pred, gt).rotation);
      below += quaternion_angle(Rp, R) < M_PI / 6;
    }
    acc_dev = std::max(acc_dev, std::abs(accuracy_at(errors, M_PI / 6) - double(below) / m));
  }
  for (int trial = 0; trial < 100; ++trial) {
    const RigidPose a = RigidPose::from_matrix(oracle::random_rotation(gen), Vec3(n(gen), n(gen), n(gen)));
    const RigidPose b = RigidPose::from_matrix(oracle::random_rotation(gen), Vec3(n(gen), n(gen), n(gen)));
    const int m = 1 + int(gen() % 5);
    PointMatrix3 pts(m, 3);
    double s = 0;
    for (int i = 0; i < m; ++i) {
      const Vec3 x(n(gen), n(gen), n(gen));
      pts.row(i) = x.transpose();
      s += (a.rotation_matrix() * x + a.translation() - b.rotation_matrix() * x - b.translation()).norm();
    }
    add_dev = std::max(add_dev, std::abs(add_metric(a, b, pts) - s / m));
  }
  const double worst = std::max({ap_dev, pck_dev, mpjpe_dev, acc_dev, add_dev});
  return {worst <= 1e-9, fmt("100 trials each, max deviation: AP %.3g, PCK %.3g, MPJPE %.3g, Acc-pi/6 %.3g, ADD %.3g",
                             ap_dev, pck_dev, mpjpe_dev, acc_dev, add_dev)};
}

// AC7: the unoccluded set only grows with delta.
Outcome mining_monotone(const ShapeBasis& basis) {
  SynthSpec spec;
  spec.min_objects = 3;
  spec.max_objects = 6;
  spec.n_frames = 1;
  const std::vector<double> deltas = {0.01, 0.1, 0.2, 0.5};
  std::vector<std::vector<OcclusionLabel>> labels(deltas.size());
  std::vector<OcclusionLabel> truth;
  int frames = 0, violations = 0;
  for (std::uint64_t seed = 0; frames < 50; ++seed) {
    const SyntheticScene scene = generate_scene(seed, spec, basis);
    const DetectionStream s = corrupt(scene, {}, seed);
    for (const auto& frame : s.frames) {
      if (frames == 50) break;
      ++frames;
      for (StripOverlapMode mode : {StripOverlapMode::kIoU, StripOverlapMode::kIntersectionOverStrip}) {
        std::vector<bool> prev(frame.size(), false);
        for (std::size_t k = 0; k < deltas.size(); ++k) {
          HeuristicOptions o;
          o.delta = deltas[k];
          o.mode = mode;
          const auto cur = heuristic_unoccluded(frame, s.width, s.height, o);
          for (std::size_t i = 0; i < frame.size(); ++i) {
            const bool on = cur[i].status == OcclusionStatus::kUnoccluded;
            violations += prev[i] && !on;
            prev[i] = on;
          }
          if (mode == StripOverlapMode::kIoU) labels[k].insert(labels[k].end(), cur.begin(), cur.end());
        }
      }
      for (const Detection& d : frame) {
        const bool clear = *d.gt_occlusion_fraction == 0.0 && !touches_border(d.bbox, s.width, s.height, 2.0);
        truth.push_back({clear ? OcclusionStatus::kUnoccluded : OcclusionStatus::kOccluded, LabelSource::kGroundTruth});
      }
    }
  }
  std::string report;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    const ClassifierReport r = evaluate_classifier(labels[k], truth);
    report += fmt("; delta %.2f recall %.3f precision %.3f", deltas[k], r.recall, r.precision);
  }
  return {violations == 0, fmt("50 frames, %zu detections, both overlap modes: %d monotonicity violations (IoU mode", truth.size(),
                               violations) + report + ")"};
}

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "clipart");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = clipart::cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// AC8: synth, pipeline with exact mining, eval.
Outcome end_to_end() {
  const fs::path dir = fs::temp_directory_path() / ("clipart_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  const auto t0 = Clock::now();
  const auto p = [&](const std::string& rel) { return (dir / rel).string(); };
  Outcome out;
  const CliResult s = cli({"synth", "--seed", "8", "--scenes", "4", "--frames", "5", "--output", p("corpus")});
  const CliResult pl = s.code ? s : cli({"pipeline", "--corpus", p("corpus"), "--classifier", "ground_truth", "--output", p("out")});
  const CliResult ev = pl.code ? pl
                               : cli({"eval", "--pred", p("out/index.json"), "--gt", p("out/reference_index.json"),
                                      "--output", p("eval")});
  const double elapsed = seconds_since(t0);
  if (ev.code != 0) {
    out.detail = "command failed: " + ev.err;
  } else {
    const auto rep = nlohmann::json::parse(ev.out);
    const double acc = rep["acc_pi6"], mp = rep["mpjpe"], ap = rep["ap_box_50"];
    const int matched = rep["n_matched"], n_gt = rep["n_gt"];
    out.pass = acc == 1.0 && std::abs(mp) <= 1e-6 && ap == 1.0 && elapsed < 300.0 && n_gt > 0;
    out.detail = fmt("4 sequences x 5 frames, %d/%d objects matched: Acc-pi/6 %.6g, MPJPE %.3g m, AP box@0.5 %.6g, "
                     "runtime %.1f s",
                     matched, n_gt, acc, mp, ap, elapsed);
  }
  fs::remove_all(dir);
  return out;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// AC9: mutated documents and RLE identity.
Outcome format_robustness() {
  struct Target {
    std::string file;
    std::vector<fuzz::Edit> edits;
    std::function<std::string(const std::string&)> roundtrip;
  };
  const std::vector<Target> targets = {
      {"annotations.json", fuzz::annotation_edits(),
       [](const std::string& t) { return serialize_annotations(parse_annotations(t, "fuzz")); }},
      {"calibration.json", fuzz::calibration_edits(),
       [](const std::string& t) { return serialize_calibration(parse_calibration(t, "fuzz")); }},
  };
  const fs::path golden = fs::path(CLIPART_TEST_DATA) / "golden";
  std::mt19937_64 gen(9);
  int documents = 0, structured = 0, accepted = 0, foreign = 0, silent = 0, unstable = 0;
  for (const Target& t : targets) {
    fuzz::Mutator mut(slurp(golden / t.file), t.edits);
    for (int i = 0; i < 500; ++i) {
      const fuzz::Mutant m = mut.next(gen);
      ++documents;
      try {
        const std::string once = t.roundtrip(m.text);
        ++accepted;
        silent += m.must_fail;
        unstable += t.roundtrip(once) != once;
      } catch (const Error&) {
        ++structured;
      } catch (const std::exception&) {
        ++foreign;
      }
    }
  }
  int rle_bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const int w = 1 + int(gen() % 40), h = 1 + int(gen() % 40);
    std::bernoulli_distribution on(double(gen() % 101) / 100.0);
    const bool blocky = gen() % 2;
    Mask m(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) m.set(x, y, blocky ? ((x / 5 + y / 7) % 2 == 0) != on(gen) && on(gen) : on(gen));
    const RleMask rle = rle_encode(m);
    rle_bad += !(rle_decode(rle) == m) || rle_area(rle) != m.count();
  }
  return {foreign == 0 && silent == 0 && unstable == 0 && rle_bad == 0,
          fmt("%d mutated documents: %d structured errors, %d accepted (%d must-fail accepted, %d not fixed points), "
              "%d other exceptions; RLE round trip failures %d/1000",
              documents, structured, accepted, silent, unstable, foreign, rle_bad)};
}

}  // namespace

int main() {
  const ShapeBasis basis = make_toy_basis(2);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 pose recovery, noise-free", [&] { return pose_noise_free(basis); }},
      {"AC2 pose recovery, sigma 1 px", [&] { return pose_noisy(basis); }},
      {"AC3 ground-plane depth", [] { return ground_plane_depth(); }},
      {"AC4 compositor vs z-buffer", [&] { return compositor(basis); }},
      {"AC5 Jacobian vs finite differences", [&] { return jacobian(basis); }},
      {"AC6 metric oracles", [] { return metric_oracles(); }},
      {"AC7 mining monotonicity", [&] { return mining_monotone(basis); }},
      {"AC8 synth -> pipeline -> eval", [] { return end_to_end(); }},
      {"AC9 format robustness", [] { return format_robustness(); }},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
