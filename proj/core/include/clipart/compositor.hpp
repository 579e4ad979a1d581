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

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "clipart/geometry.hpp"
#include "clipart/image.hpp"
#include "clipart/pose_fit.hpp"
#include "clipart/raster.hpp"
#include "clipart/shape_model.hpp"
#include "clipart/types.hpp"

namespace clipart {

// Rectangle in ground-plane coordinates (see CameraModel::to_ground).
struct OrientedRect {
  Vec2 center = Vec2::Zero();
  Vec2 axis = Vec2::UnitX();  // unit direction of the first half-extent
  double half_u = 0.0;
  double half_v = 0.0;

  std::array<Vec2, 4> corners() const;  // counter-clockwise
  double area() const { return 4.0 * half_u * half_v; }
};

// Minimum-area enclosing rectangle (rotating calipers over the hull edges).
OrientedRect min_area_rect(const std::vector<Vec2>& points);

// Separating-axis test. Rectangles that only touch count as disjoint.
bool rects_intersect(const OrientedRect& a, const OrientedRect& b);

inline constexpr double kFootprintMargin = 0.1;
inline constexpr double kSelfOcclusionMargin = 0.05;
inline constexpr double kPersonProxyWidth = 0.5;
inline constexpr double kPersonProxyHeight = 1.7;
inline constexpr double kPersonProxyDepth = 0.3;

struct ReconstructedObject {
  std::int64_t object_id = 0;
  ObjectClass cls = ObjectClass::kCar;
  RigidPose pose;
  ShapeCoefficients coeffs;
  // Optional person skeleton in the object frame.
  std::optional<PointMatrix3> skeleton3d;
  // Unoccluded cut-out; its mask is both modal and amodal.
  ImagePatch source_crop;
  Keypoints2D keypoints2d_source;
  OrientedRect footprint;

  std::int64_t track_id = -1;
  std::int64_t frame_id = 0;
  std::int64_t detection_id = -1;
  std::optional<std::int64_t> gt_object_id;
};

// Object-frame keypoints: the instantiated shape for vehicles, the skeleton
// (possibly empty) for persons.
PointMatrix3 object_keypoints(const ReconstructedObject& object, const ShapeBasis& basis);
// Object-frame points whose hull is the object's 3D extent. Persons without
// a skeleton use an upright proxy box standing on y = 0.
std::vector<Vec3> hull_points(ObjectClass cls, const RigidPose& pose, const PointMatrix3& keypoints);
std::vector<Vec3> hull_points(const ReconstructedObject& object, const ShapeBasis& basis);

// Tight rectangle of the ground-projected hull points, inflated by `margin`.
OrientedRect compute_footprint(const CameraModel& camera, const std::vector<Vec3>& camera_points,
                               double margin = kFootprintMargin);

struct SceneConfig {
  int min_objects = 1;
  int max_objects = 6;
  std::uint64_t seed = 0;
  double min_depth = 0.0;
  double max_depth = 1e9;
  int feather_px = 0;
  bool allow_person = true;
  bool allow_car = true;
  // composite() rejects intersecting footprints unless this is cleared.
  // Not serialized; used for reference renders of ground-truth objects.
  bool require_disjoint = true;

  // Throws kConfigError.
  void validate() const;
};

// Seeded subset of the pool with pairwise-disjoint footprints, restricted to
// allowed classes and to footprint-center depths in [min_depth, max_depth].
// The target size is drawn from [min_objects, max_objects]; when the target
// is infeasible the greedy pass returns a maximal disjoint set.
std::vector<ReconstructedObject> sample_nonintersecting(const std::vector<ReconstructedObject>& pool,
                                                        const CameraModel& camera,
                                                        const SceneConfig& config);

struct CompositeObject {
  std::int64_t object_id = 0;
  ObjectClass cls = ObjectClass::kCar;
  std::int64_t track_id = -1;
  std::optional<std::int64_t> gt_object_id;
  Mask amodal_mask;
  Mask modal_mask;
  Box amodal_bbox;
  Box modal_bbox;
  Keypoints2D keypoints;
  // Camera-frame 3D keypoints.
  PointMatrix3 keypoints3d;
  RigidPose pose;
  ShapeCoefficients coeffs;
  double occlusion_fraction = 0.0;
  double mean_depth = 0.0;
};

struct ClipArtRecord {
  Image image;
  DepthMap depth_map;
  // Same order as the input objects.
  std::vector<CompositeObject> objects;
  // Input indices, first painted first.
  std::vector<int> paint_order;
  std::uint64_t rng_seed = 0;
};

// Far-to-near order. Each pair with overlapping image boxes is ordered by
// which side of a separating line between their footprints the camera foot
// (the ground origin) falls on: the object on the camera side cannot be
// hidden by the other. Remaining freedom goes to decreasing footprint-center
// depth, then input index.
std::vector<int> painter_order(const std::vector<OrientedRect>& footprints,
                               const std::vector<double>& depths, const std::vector<Box>& boxes);

// Depth of the object's hull over its amodal mask. Mask pixels the hull
// misses take the hull's centroid depth.
DepthPatch rasterize_hull_depth(const CameraModel& camera, const ReconstructedObject& object,
                                const ShapeBasis& basis);

ClipArtRecord composite(const Image& background, const std::vector<ReconstructedObject>& objects,
                        const CameraModel& camera, const ShapeBasis& basis, const SceneConfig& config);

// 1 - |modal| / |amodal|. Throws kEmptyAmodal / kModalNotSubset.
double occlusion_fraction(const Mask& modal, const Mask& amodal);

}  // namespace clipart
