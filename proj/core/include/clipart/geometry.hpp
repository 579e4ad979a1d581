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

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace clipart {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Continuous image coordinates. Pixel (c, r) covers [c, c+1) x [r, r+1), so
// its center sits at (c + 0.5, r + 0.5).
struct Pixel {
  double u = 0.0;
  double v = 0.0;
};

// Pinhole intrinsics plus the metric ground plane n^T X + d = 0, both in the
// camera frame. Instances are always canonical: |n| = 1 and d < 0, i.e. the
// camera center lies on the negative side and n points toward the ground.
class CameraModel {
 public:
  // Validates and canonicalizes. Throws Error(kInvalidCamera) on skew,
  // non-positive focal lengths, a malformed last row, an empty image, a
  // zero normal, or a plane passing through the camera center.
  static CameraModel create(const Mat3& intrinsics, const Vec3& plane_normal,
                            double plane_offset, int width, int height);

  const Mat3& intrinsics() const { return K_; }
  const Mat3& intrinsics_inverse() const { return K_inv_; }
  const Vec3& plane_normal() const { return normal_; }
  double plane_offset() const { return offset_; }
  int width() const { return width_; }
  int height() const { return height_; }

  double fx() const { return K_(0, 0); }
  double fy() const { return K_(1, 1); }
  double cx() const { return K_(0, 2); }
  double cy() const { return K_(1, 2); }

  // Signed distance of X to the ground plane (positive below the ground).
  double plane_residual(const Vec3& X) const { return normal_.dot(X) + offset_; }

  // Orthonormal frame of the ground plane: origin is the foot of the camera
  // center, u_axis follows the camera x axis, v_axis points away from the
  // camera. (u_axis, v_axis, -normal) is right-handed.
  const Vec3& ground_origin() const { return ground_origin_; }
  const Vec3& ground_u_axis() const { return ground_u_; }
  const Vec3& ground_v_axis() const { return ground_v_; }
  Vec2 to_ground(const Vec3& X) const;
  Vec3 from_ground(const Vec2& g) const;

  // Same camera with focal lengths and principal point scaled by s.
  CameraModel scaled(double s) const;

 private:
  CameraModel() = default;

  Mat3 K_ = Mat3::Identity();
  Mat3 K_inv_ = Mat3::Identity();
  Vec3 normal_ = Vec3::UnitY();
  double offset_ = -1.0;
  int width_ = 1;
  int height_ = 1;
  Vec3 ground_origin_ = Vec3::Zero();
  Vec3 ground_u_ = Vec3::UnitX();
  Vec3 ground_v_ = Vec3::UnitZ();
};

// SE(3) element mapping object coordinates into the camera frame:
// X_cam = R X + t. Rotation is stored as a unit quaternion.
class RigidPose {
 public:
  RigidPose() = default;
  RigidPose(const Eigen::Quaterniond& rotation, const Vec3& translation);

  static RigidPose identity() { return {}; }
  // R must be a rotation within 1e-6; it is re-orthonormalized.
  static RigidPose from_matrix(const Mat3& rotation, const Vec3& translation);

  const Eigen::Quaterniond& rotation() const { return q_; }
  Mat3 rotation_matrix() const { return q_.toRotationMatrix(); }
  const Vec3& translation() const { return t_; }

  Vec3 apply(const Vec3& X) const { return q_ * X + t_; }
  // (this * other)(X) = this(other(X)).
  RigidPose compose(const RigidPose& other) const;
  RigidPose inverse() const;

 private:
  Eigen::Quaterniond q_ = Eigen::Quaterniond::Identity();
  Vec3 t_ = Vec3::Zero();
};

inline RigidPose compose(const RigidPose& a, const RigidPose& b) { return a.compose(b); }
inline RigidPose invert(const RigidPose& a) { return a.inverse(); }
inline Vec3 apply(const RigidPose& a, const Vec3& X) { return a.apply(X); }

// Perspective projection. Throws kNonPositiveDepth when z <= 1e-9.
Pixel project(const CameraModel& camera, const Vec3& point);

// Unit-norm direction of K^-1 (u, v, 1).
Vec3 backproject_ray(const CameraModel& camera, Pixel pixel);

// Depth z_b of the ground point seen at `pixel`, so that z_b K^-1 p lies on
// the plane. Throws kRayParallelToPlane or kPointBehindCamera.
double ground_depth(const CameraModel& camera, Pixel pixel);

// The 3D ground point z_b K^-1 p.
Vec3 ground_point(const CameraModel& camera, Pixel pixel);

Mat3 skew(const Vec3& w);
// Rodrigues exponential map so(3) -> SO(3).
Mat3 exp_so3(const Vec3& w);
// Geodesic angle between two rotations, in [0, pi].
double rotation_angle(const Mat3& a, const Mat3& b);

// Upright orientation on the ground plane: object y axis = -n, object z axis
// = `heading` projected onto the plane. Throws kInvalidArgument if heading is
// parallel to n.
Mat3 upright_rotation(const CameraModel& camera, const Vec3& heading);

}  // namespace clipart
