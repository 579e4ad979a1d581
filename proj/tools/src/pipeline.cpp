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
#include <cstdio>
#include <fstream>
#include <sstream>

#include "clipart/compositor.hpp"
#include "clipart/error.hpp"
#include "clipart/image_io.hpp"
#include "clipart/parallel.hpp"
#include "clipart/random.hpp"
#include "stages.hpp"

namespace clipart::cli {

namespace fs = std::filesystem;

namespace {

// Failures that only mean "this track cannot be reconstructed".
bool skippable(ErrorCode code) {
  return code == ErrorCode::kTooFewPoints || code == ErrorCode::kDegenerateConfiguration ||
         code == ErrorCode::kDivergedOptimization || code == ErrorCode::kNonPositiveDepth ||
         code == ErrorCode::kRayParallelToPlane || code == ErrorCode::kPointBehindCamera;
}

std::vector<ReconstructionEntry> fit_one(const CameraModel& camera, const ShapeBasis& basis,
                                         const ObjectTrack& track, const PipelineConfig& config) {
  std::vector<ReconstructionEntry> out;
  if (track.cls == ObjectClass::kCar) {
    const TrackFit fit = fit_track(camera, basis, track, config.fit);
    for (std::size_t i = 0; i < track.frames.size(); ++i) {
      const TrackFrame& f = track.frames[i];
      const FitResult& r = fit.frames[i];
      ReconstructionEntry e;
      e.cls = track.cls;
      e.track_id = track.track_id;
      e.frame_id = f.frame_id;
      e.detection_id = f.detection_id;
      e.gt_object_id = f.gt_object_id;
      e.pose = r.pose;
      e.coeffs = fit.shared_coeffs;
      e.bbox = f.bbox;
      e.modal_mask = f.modal_mask;
      e.keypoints = f.keypoints;
      e.rms_reprojection_error = r.rms_reprojection_error;
      e.n_inlier_keypoints = r.n_inlier_keypoints;
      e.converged = r.converged;
      out.push_back(std::move(e));
    }
  } else {
    for (const TrackFrame& f : track.frames) {
      ReconstructionEntry e;
      e.cls = track.cls;
      e.track_id = track.track_id;
      e.frame_id = f.frame_id;
      e.detection_id = f.detection_id;
      e.gt_object_id = f.gt_object_id;
      e.pose = place_on_ground(camera, f.bbox, config.person_height);
      e.coeffs = ShapeCoefficients::zeros(0);
      e.bbox = f.bbox;
      e.modal_mask = f.modal_mask;
      e.keypoints = f.keypoints;
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace

std::string numbered(const char* stem, std::int64_t n) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04lld", stem, static_cast<long long>(n));
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(text.data(), std::streamsize(text.size()))) {
    fail(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kInputMissing, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path frame_path(const fs::path& dir, std::int64_t frame_id) { return dir / (numbered("frame", frame_id) + ".ppm"); }

std::vector<Image> load_frames(const fs::path& dir, const DetectionStream& stream) {
  std::vector<Image> frames;
  for (std::int64_t id : stream.frame_ids) {
    const fs::path p = frame_path(dir, id);
    if (!fs::exists(p)) fail(ErrorCode::kInputMissing, "frame image '" + p.string() + "' does not exist");
    Image img = read_ppm(p);
    if (img.width() != stream.width || img.height() != stream.height) {
      fail(ErrorCode::kInputMissing, "frame image '" + p.string() + "' does not match the stream size");
    }
    frames.push_back(std::move(img));
  }
  return frames;
}

ShapeBasis resolve_basis(const PipelineConfig& config, const fs::path& fallback) {
  if (!config.paths.shape_basis.empty()) return load_basis(config.paths.shape_basis);
  if (!fallback.empty() && fs::exists(fallback)) return load_basis(fallback);
  return make_toy_basis(2);
}

std::vector<ObjectTrack> mine_stage(const DetectionStream& stream, const PipelineConfig& config) {
  return in_stage("mine", [&] {
    const GroundTruthClassifier gt(config.mining.heuristic.border_margin_px);
    const HeuristicClassifier heuristic(config.mining.heuristic);
    const OcclusionClassifier& classifier =
        config.mining.classifier == ClassifierKind::kGroundTruth ? static_cast<const OcclusionClassifier&>(gt)
                                                                 : heuristic;
    return mine_unoccluded(stream.frames, stream.width, stream.height, classifier, config.mining.tracker)
        .tracks;
  });
}

std::vector<ReconstructionEntry> fit_stage(const CameraModel& camera, const ShapeBasis& basis,
                                           const std::vector<ObjectTrack>& tracks, const PipelineConfig& config,
                                           int threads, std::size_t* skipped) {
  return in_stage("fit", [&] {
    std::vector<std::vector<ReconstructionEntry>> per_track(tracks.size());
    std::vector<char> failed(tracks.size(), 0);
    parallel_for(tracks.size(), threads, [&](std::size_t i) {
      try {
        per_track[i] = fit_one(camera, basis, tracks[i], config);
      } catch (const Error& e) {
        if (!skippable(e.code())) throw;
        failed[i] = 1;
      }
    });
    std::vector<ReconstructionEntry> out;
    for (auto& entries : per_track) {
      for (auto& e : entries) {
        e.object_id = std::int64_t(out.size());
        out.push_back(std::move(e));
      }
    }
    *skipped = std::size_t(std::count(failed.begin(), failed.end(), 1));
    return out;
  });
}

std::vector<ReconstructedObject> build_pool(const CameraModel& camera, const ShapeBasis& basis,
                                            const std::vector<ReconstructionEntry>& entries,
                                            const DetectionStream& stream, const std::vector<Image>& frames) {
  std::vector<ReconstructedObject> pool;
  for (const ReconstructionEntry& e : entries) {
    const auto it = std::find(stream.frame_ids.begin(), stream.frame_ids.end(), e.frame_id);
    if (it == stream.frame_ids.end()) {
      fail(ErrorCode::kValidationError, "reconstruction refers to unknown frame " + std::to_string(e.frame_id));
    }
    ReconstructedObject o;
    o.object_id = e.object_id;
    o.cls = e.cls;
    o.pose = e.pose;
    o.coeffs = e.coeffs;
    o.source_crop = extract_patch(frames[std::size_t(it - stream.frame_ids.begin())], rle_decode(e.modal_mask));
    o.keypoints2d_source = e.keypoints;
    o.track_id = e.track_id;
    o.frame_id = e.frame_id;
    o.detection_id = e.detection_id;
    o.gt_object_id = e.gt_object_id;
    o.footprint = compute_footprint(camera, hull_points(o, basis));
    pool.push_back(std::move(o));
  }
  return pool;
}

SequenceSummary composite_stage(const CameraModel& camera, const ShapeBasis& basis,
                                const std::vector<ReconstructedObject>& pool, const Image& background,
                                const std::vector<Image>& frames, const std::optional<SequenceGroundTruth>& truth,
                                const PipelineConfig& config, std::uint64_t seed, std::int64_t id_base,
                                const fs::path& root, const std::string& prefix, bool write) {
  return in_stage("composite", [&] {
    SequenceSummary summary;
    if (pool.empty()) return summary;
    for (int s = 0; s < config.scenes_per_sequence; ++s) {
      SceneConfig sc = config.scene;
      sc.seed = derive_seed(seed, std::uint64_t(s));
      const std::vector<ReconstructedObject> chosen = sample_nonintersecting(pool, camera, sc);
      if (chosen.empty()) continue;
      const ClipArtRecord record = composite(background, chosen, camera, basis, sc);
      const std::string dir = prefix + numbered("scene", s) + "/";
      const std::int64_t image_id = id_base + s;
      AnnotationFile file;
      file.camera = camera;
      file.rng_seed = sc.seed;
      file.images.push_back(annotate(record, image_id, dir + "image.ppm"));
      if (write) {
        fs::create_directories(root / dir);
        write_ppm(record.image, root / dir / "image.ppm");
        write_pfm(record.depth_map, root / dir / "depth.pfm");
        save_annotations(file, root / dir / "annotations.json");
      }
      summary.annotation_files.push_back(dir + "annotations.json");
      summary.scenes += 1;
      summary.objects += chosen.size();

      const bool keyed = std::all_of(chosen.begin(), chosen.end(),
                                     [](const ReconstructedObject& o) { return o.gt_object_id.has_value(); });
      if (truth && keyed) {
        std::vector<ReferenceKey> keys;
        for (const ReconstructedObject& o : chosen) keys.push_back({o.object_id, o.track_id, *o.gt_object_id, o.frame_id});
        const std::vector<ReconstructedObject> gt_objects = ground_truth_objects(*truth, keys, frames, basis);
        SceneConfig rc = sc;
        rc.require_disjoint = false;
        const ClipArtRecord reference = composite(background, gt_objects, camera, basis, rc);
        AnnotationFile ref_file;
        ref_file.camera = camera;
        ref_file.rng_seed = sc.seed;
        ref_file.images.push_back(annotate(reference, image_id, dir + "image.ppm"));
        if (write) save_annotations(ref_file, root / dir / "reference.json");
        summary.reference_files.push_back(dir + "reference.json");
      }
    }
    return summary;
  });
}

SequenceSummary run_sequence(const SequenceInputs& in, const ShapeBasis& basis, const PipelineConfig& config,
                             std::uint64_t seed, std::int64_t id_base, const fs::path& root,
                             const std::string& prefix, int threads, bool write) {
  const std::vector<ObjectTrack> tracks = mine_stage(in.detections, config);
  std::size_t skipped = 0;
  const std::vector<ReconstructionEntry> entries = fit_stage(in.camera, basis, tracks, config, threads, &skipped);
  if (write) {
    fs::create_directories(root / prefix);
    write_text(root / prefix / "tracks.json", serialize_tracks(tracks, in.detections.width, in.detections.height));
    write_text(root / prefix / "reconstructions.json", serialize_reconstructions(entries));
  }
  const std::vector<ReconstructedObject> pool =
      in_stage("composite", [&] { return build_pool(in.camera, basis, entries, in.detections, in.frames); });
  SequenceSummary summary = composite_stage(in.camera, basis, pool, in.background, in.frames, in.truth, config, seed,
                                            id_base, root, prefix, write);
  summary.tracks = tracks.size();
  summary.skipped_tracks = skipped;
  summary.reconstructions = entries.size();
  return summary;
}

}  // namespace clipart::cli
