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

#include <cmath>
#include <random>

#include "clipart/compositor.hpp"
#include "clipart/geometry.hpp"
#include "clipart/shape_model.hpp"
#include "clipart/synth.hpp"
#include "clipart/types.hpp"

namespace testing_support {

using namespace clipart;

inline Mat3 intrinsics(double f, double cx, double cy) {
  Mat3 K;
  K << f, 0, cx, 0, f, cy, 0, 0, 1;
  return K;
}

// Camera `height` meters above flat ground, pitched down by `pitch_deg`.
inline CameraModel street_camera(double height = 6.0, double pitch_deg = 20.0, double f = 800.0, int w = 640,
                                 int h = 480) {
  const double p = pitch_deg * M_PI / 180.0;
  return CameraModel::create(intrinsics(f, w / 2.0, h / 2.0), Vec3(0, std::cos(p), std::sin(p)), -height, w, h);
}

inline Keypoints2D project_all(const CameraModel& cam, const RigidPose& pose, const PointMatrix3& X) {
  PointMatrix2 uv(X.rows(), 2);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const Pixel p = project(cam, pose.apply(X.row(i).transpose()));
    uv.row(i) << p.u, p.v;
  }
  return Keypoints2D::all_visible(uv);
}

// Upright pose standing on the ground of `cam` at ground coordinates g with
// a yaw angle about the plane normal.
inline RigidPose ground_pose(const CameraModel& cam, const Vec2& g, double yaw) {
  const Vec3 heading = std::cos(yaw) * cam.ground_v_axis() + std::sin(yaw) * cam.ground_u_axis();
  return RigidPose::from_matrix(upright_rotation(cam, heading), cam.from_ground(g));
}

// Every object of every frame of one synthetic sequence, with exact crops.
struct ScenePool {
  SyntheticScene scene;
  std::vector<ReconstructedObject> pool;
};

inline ScenePool scene_pool(std::uint64_t seed, const ShapeBasis& basis, int frames = 4, int max_objects = 5) {
  SynthSpec spec;
  spec.n_frames = frames;
  spec.min_objects = 2;
  spec.max_objects = max_objects;
  ScenePool out{generate_scene(seed, spec, basis), {}};
  std::vector<ReferenceKey> keys;
  for (const GroundTruthFrame& f : out.scene.truth.frames) {
    for (const GroundTruthObjectState& o : f.objects) {
      keys.push_back({std::int64_t(keys.size()), o.object_id, o.object_id, f.frame_id});
    }
  }
  out.pool = ground_truth_objects(out.scene.truth, keys, out.scene.frames, basis);
  return out;
}

}  // namespace testing_support
