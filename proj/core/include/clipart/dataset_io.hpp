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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "clipart/compositor.hpp"
#include "clipart/geometry.hpp"
#include "clipart/metrics.hpp"
#include "clipart/mining.hpp"
#include "clipart/pose_fit.hpp"
#include "clipart/rle.hpp"
#include "clipart/shape_model.hpp"

namespace clipart {

// All documents are JSON with a "version" tag. Parsers reject malformed or
// inconsistent input with kParseError (structure), kValidationError
// (semantics) or kVersionMismatch, prefixed by the source name and a field
// path. Serializers are canonical: re-serializing a parsed document gives
// the same bytes.

inline constexpr int kMaxImageSide = 1 << 15;

// ---- calibration ---------------------------------------------------------
std::string serialize_calibration(const CameraModel& camera);
CameraModel parse_calibration(const std::string& text, const std::string& source);
CameraModel load_calibration(const std::filesystem::path& path);
void save_calibration(const CameraModel& camera, const std::filesystem::path& path);

// ---- scene config --------------------------------------------------------
std::string serialize_scene_config(const SceneConfig& config);
SceneConfig parse_scene_config(const std::string& text, const std::string& source);

// ---- detection stream ----------------------------------------------------
struct DetectionStream {
  int width = 0;
  int height = 0;
  // One entry per frame in temporal order; detections carry the frame id.
  std::vector<std::int64_t> frame_ids;
  std::vector<std::vector<Detection>> frames;
};

std::string serialize_detections(const DetectionStream& stream);
DetectionStream parse_detections(const std::string& text, const std::string& source);
DetectionStream load_detections(const std::filesystem::path& path);
void save_detections(const DetectionStream& stream, const std::filesystem::path& path);

// ---- annotations ---------------------------------------------------------
struct AnnotationObject {
  std::int64_t id = 0;
  ObjectClass cls = ObjectClass::kCar;
  std::int64_t track_id = -1;
  std::optional<std::int64_t> gt_object_id;
  std::optional<double> score;
  Box amodal_bbox;
  Box modal_bbox;
  RleMask amodal_mask;
  RleMask modal_mask;
  Keypoints2D keypoints;
  std::optional<PointMatrix3> keypoints3d;
  RigidPose pose;
  ShapeCoefficients coeffs;
  double occlusion_fraction = 0.0;
  double mean_depth = 0.0;
};

struct AnnotatedImage {
  std::int64_t image_id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;
  std::vector<AnnotationObject> objects;
};

struct AnnotationFile {
  std::optional<CameraModel> camera;
  std::uint64_t rng_seed = 0;
  std::vector<AnnotatedImage> images;
};

AnnotatedImage annotate(const ClipArtRecord& record, std::int64_t image_id, const std::string& file_name);

std::string serialize_annotations(const AnnotationFile& file);
// Besides structure, checks that masks decode to the image size, that
// occlusion_fraction matches the masks within 1e-9, that the modal mask lies
// inside the amodal one and that quaternions are unit within 1e-6.
AnnotationFile parse_annotations(const std::string& text, const std::string& source);
AnnotationFile load_annotations(const std::filesystem::path& path);
void save_annotations(const AnnotationFile& file, const std::filesystem::path& path);

// Decodes masks for evaluation.
std::vector<EvalImage> to_eval_images(const AnnotationFile& file);

// ---- index ---------------------------------------------------------------
// Relative paths of documents, resolved against the index's directory.
std::string serialize_index(const std::vector<std::string>& documents);
std::vector<std::string> parse_index(const std::string& text, const std::string& source);

// Loads an annotation document, or every document listed by an index file,
// merged in listed order.
AnnotationFile load_annotation_set(const std::filesystem::path& path);

// ---- tracks and reconstructions ----------------------------------------
std::string serialize_tracks(const std::vector<ObjectTrack>& tracks, int width, int height);
std::vector<ObjectTrack> parse_tracks(const std::string& text, const std::string& source);

struct ReconstructionEntry {
  std::int64_t object_id = 0;
  ObjectClass cls = ObjectClass::kCar;
  std::int64_t track_id = -1;
  std::int64_t frame_id = 0;
  std::int64_t detection_id = -1;
  std::optional<std::int64_t> gt_object_id;
  RigidPose pose;
  ShapeCoefficients coeffs;
  Box bbox;
  RleMask modal_mask;
  Keypoints2D keypoints;
  double rms_reprojection_error = 0.0;
  int n_inlier_keypoints = 0;
  bool converged = true;
};

std::string serialize_reconstructions(const std::vector<ReconstructionEntry>& entries);
std::vector<ReconstructionEntry> parse_reconstructions(const std::string& text, const std::string& source);

// ---- COCO export ---------------------------------------------------------
enum class CocoMaskMode { kAmodal, kModal };

// COCO-style document: categories car and person, uncompressed RLE
// segmentation, flattened keypoints with visibility 0 (missing), 1
// (occluded or self-occluded), 2 (visible).
std::string export_coco(const AnnotationFile& file, CocoMaskMode mode);
int coco_visibility(Visibility v);

}  // namespace clipart
