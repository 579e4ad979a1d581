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
#include "clipart/dataset_io.hpp"
#include "clipart/geometry.hpp"
#include "clipart/image.hpp"
#include "clipart/shape_model.hpp"

namespace clipart {

struct SynthSpec {
  int width = 640;
  int height = 480;
  int n_frames = 5;
  int min_objects = 1;
  int max_objects = 4;
  double person_probability = 0.25;
  double min_depth = 5.0;
  double max_depth = 60.0;
  double min_camera_height = 3.0;
  double max_camera_height = 10.0;
  double min_pitch_deg = 10.0;
  double max_pitch_deg = 45.0;
  double max_roll_deg = 3.0;
  double min_focal = 600.0;
  double max_focal = 1000.0;
  // Speeds in meters per frame.
  double max_car_speed = 0.5;
  double max_person_speed = 0.1;
  // Every hull point must project this far inside the image.
  double edge_margin_px = 4.0;
  int min_mask_pixels = 60;
  int max_attempts = 1000;

  // Throws kConfigError.
  void validate() const;
};

struct GroundTruthObjectState {
  std::int64_t object_id = 0;
  ObjectClass cls = ObjectClass::kCar;
  ShapeCoefficients coeffs;
  RigidPose pose;
  RleMask amodal_mask;
  RleMask modal_mask;
  // Exact projections with z-buffer visibility codes (empty for persons).
  Keypoints2D keypoints;
  PointMatrix3 keypoints3d;  // camera frame
  double occlusion_fraction = 0.0;
};

struct GroundTruthFrame {
  std::int64_t frame_id = 0;
  std::vector<GroundTruthObjectState> objects;
};

struct SequenceGroundTruth {
  std::uint64_t seed = 0;
  std::optional<CameraModel> camera;
  std::vector<GroundTruthFrame> frames;

  const GroundTruthObjectState* find(std::int64_t frame_id, std::int64_t object_id) const;
};

struct SyntheticScene {
  CameraModel camera;
  Image background;
  std::vector<Image> frames;
  SequenceGroundTruth truth;
};

// Deterministic per seed. Cars use random shape coefficients within two
// scales and random headings; persons are proxy boxes facing the camera.
// The object count is drawn from [min_objects, max_objects]; objects past
// min_objects that find no room within spec.max_attempts draws are dropped.
// Throws kInfeasiblePlacement when the minimum cannot be placed, or when no
// camera seeing enough ground turns up within max_attempts draws.
SyntheticScene generate_scene(std::uint64_t seed, const SynthSpec& spec, const ShapeBasis& basis);

struct NoiseSpec {
  double keypoint_sigma_px = 0.0;
  int mask_jitter_px = 0;
  double dropout = 0.0;
};

// Detection stream with ground truth retained: one detection per visible
// object and frame, modal mask (optionally dilated or eroded by up to
// mask_jitter_px), bbox of that mask, keypoints with Gaussian noise and
// dropout to missing.
DetectionStream corrupt(const SyntheticScene& scene, const NoiseSpec& noise, std::uint64_t seed);

std::string serialize_ground_truth(const SequenceGroundTruth& truth);
SequenceGroundTruth parse_ground_truth(const std::string& text, const std::string& source);
SequenceGroundTruth load_ground_truth(const std::filesystem::path& path);
void save_ground_truth(const SequenceGroundTruth& truth, const std::filesystem::path& path);

// Identifies one composited object and the ground-truth instance behind it.
struct ReferenceKey {
  std::int64_t object_id = 0;
  std::int64_t track_id = -1;
  std::int64_t gt_object_id = 0;
  std::int64_t frame_id = 0;
};

// Ground-truth counterparts of composited objects: true pose and shape,
// true amodal mask cut from the frame image.
std::vector<ReconstructedObject> ground_truth_objects(const SequenceGroundTruth& truth,
                                                      const std::vector<ReferenceKey>& keys,
                                                      const std::vector<Image>& frames,
                                                      const ShapeBasis& basis);

}  // namespace clipart
