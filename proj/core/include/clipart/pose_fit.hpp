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
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "clipart/geometry.hpp"
#include "clipart/image.hpp"
#include "clipart/rle.hpp"
#include "clipart/shape_model.hpp"
#include "clipart/types.hpp"

namespace clipart {

struct FitOptions {
  int max_iterations = 100;
  double relative_cost_tolerance = 1e-10;
  double step_tolerance = 1e-12;
  // Penalty on contact-keypoint plane residuals, in cost units per m^2.
  double ground_weight = 1e3;
  // Weight of |alpha / scale|^2 relative to the noise-normalized
  // reprojection term (see refine_pose).
  double shape_prior_weight = 1.0;
  int min_keypoints = 6;
  // Maximum re-estimations of the keypoint noise variance.
  int max_noise_rounds = 10;
  // Keypoints reprojecting within this many pixels count as inliers.
  double inlier_threshold_px = 5.0;
};

struct FitResult {
  RigidPose pose;
  ShapeCoefficients coeffs;
  double rms_reprojection_error = 0.0;
  int n_inlier_keypoints = 0;
  bool converged = false;
  // Final value of the optimized objective and its per-iteration history
  // (accepted steps only, last noise round).
  double cost = 0.0;
  int iterations = 0;
  std::vector<double> cost_history;
};

struct TrackFrame {
  std::int64_t frame_id = 0;
  std::int64_t detection_id = -1;
  Box bbox;
  RleMask modal_mask;
  Keypoints2D keypoints;
  std::optional<ImagePatch> image_crop;
  std::optional<std::int64_t> gt_object_id;
};

struct ObjectTrack {
  std::int64_t track_id = 0;
  ObjectClass cls = ObjectClass::kCar;
  std::vector<TrackFrame> frames;
};

struct TrackFit {
  std::vector<FitResult> frames;
  ShapeCoefficients shared_coeffs;
};

// Fit-time weight of one keypoint: confidence when visible, half of it when
// self-occluded, zero when occluded by others or missing.
double keypoint_weight(Visibility visibility, double confidence);

// Keypoints usable for PnP: not missing and not occluded by others.
std::vector<int> pnp_indices(const Keypoints2D& keypoints);

// EPnP with four control points. Falls back to a planar homography when the
// 3D points are coplanar. Throws kTooFewPoints below `min_points` usable
// correspondences and kDegenerateConfiguration when both routes fail.
RigidPose epnp(const CameraModel& camera, const PointMatrix3& object_points,
               const Keypoints2D& keypoints, int min_points = 6);

// Levenberg-Marquardt over (R, t, alpha) minimizing
//   sum_i w_i |pi(R X_i(alpha) + t) - x_i|^2 + lambda_s s^2 |alpha / sigma|^2
// where s^2 is the keypoint noise variance re-estimated from the residuals
// until it settles. Rotation steps are axis-angle increments applied on the
// left. Throws kNonPositiveDepth if the initial pose puts a weighted
// keypoint behind the camera and kDivergedOptimization on a non-finite cost.
FitResult refine_pose(const CameraModel& camera, const ShapeBasis& basis,
                      const Keypoints2D& keypoints, const FitResult& init,
                      const FitOptions& options = {});

// EPnP per frame from the mean shape, then one joint optimization with a
// single alpha shared by all frames and a ground-plane penalty on the
// contact keypoints. Throws kEmptyTrack for a track without frames.
TrackFit fit_track(const CameraModel& camera, const ShapeBasis& basis, const ObjectTrack& track,
                   const FitOptions& options = {});

// Ground placement from the bottom-center of `bbox`: the ray-plane
// intersection gives the translation, the rotation is upright and faces the
// camera. Throws kRayParallelToPlane / kPointBehindCamera.
RigidPose place_on_ground(const CameraModel& camera, const Box& bbox, double object_height);

// Joint reprojection problem, exposed for derivative checks and benchmarks.
class ShapePoseProblem {
 public:
  struct State {
    std::vector<RigidPose> poses;
    Eigen::VectorXd alpha;
  };

  ShapePoseProblem(const CameraModel& camera, const ShapeBasis& basis,
                   std::vector<Keypoints2D> frames, double ground_weight, double prior_weight);

  int num_frames() const { return int(frames_.size()); }
  int num_parameters() const;
  int num_residuals() const;
  int degrees_of_freedom() const;

  void set_prior_weight(double w) { prior_weight_ = w; }
  double prior_weight() const { return prior_weight_; }

  // Both return false when a weighted keypoint is at depth <= 1e-9.
  bool residuals(const State& state, Eigen::VectorXd* r) const;
  bool linearize(const State& state, Eigen::VectorXd* r, Eigen::MatrixXd* jacobian) const;

  // Applies [dw_0 dt_0 ... dw_F dt_F dalpha]; alpha is clamped to +-3 sigma.
  State retract(const State& state, const Eigen::VectorXd& delta, bool clamp = true) const;

  // Weighted squared reprojection error of one frame or all frames.
  double reprojection_cost(const State& state) const;
  double frame_rms(const State& state, int frame, int* n_used, int* n_inliers,
                   double inlier_threshold) const;

 private:
  const CameraModel* camera_;
  const ShapeBasis* basis_;
  std::vector<Keypoints2D> frames_;
  std::vector<std::vector<double>> weights_;
  double ground_weight_;
  double prior_weight_;
};

}  // namespace clipart
