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

#include "clipart/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "clipart/error.hpp"

namespace clipart {
namespace {

bool all_finite(const Mat3& m) { return m.allFinite(); }

}  // namespace

CameraModel CameraModel::create(const Mat3& intrinsics, const Vec3& plane_normal,
                                double plane_offset, int width, int height) {
  if (!all_finite(intrinsics) || !plane_normal.allFinite() || !std::isfinite(plane_offset)) {
    fail(ErrorCode::kInvalidCamera, "non-finite intrinsics or plane");
  }
  if (width <= 0 || height <= 0) {
    fail(ErrorCode::kInvalidCamera, "image dimensions must be positive");
  }
  if (intrinsics(0, 1) != 0.0) {
    fail(ErrorCode::kInvalidCamera, "non-zero skew K[0][1] is not supported");
  }
  if (intrinsics(1, 0) != 0.0 || intrinsics(2, 0) != 0.0 || intrinsics(2, 1) != 0.0 ||
      intrinsics(2, 2) != 1.0) {
    fail(ErrorCode::kInvalidCamera, "K must be upper triangular with K[2][2] = 1");
  }
  if (!(intrinsics(0, 0) > 0.0) || !(intrinsics(1, 1) > 0.0)) {
    fail(ErrorCode::kInvalidCamera, "focal lengths must be positive");
  }
  const double norm = plane_normal.norm();
  if (!(norm > 1e-12)) {
    fail(ErrorCode::kInvalidCamera, "ground plane normal is zero");
  }
  // Already-unit normals are kept bit for bit so canonicalization is
  // idempotent.
  const bool unit = std::abs(norm - 1.0) <= 8.0 * std::numeric_limits<double>::epsilon();
  Vec3 n = unit ? plane_normal : Vec3(plane_normal / norm);
  double d = unit ? plane_offset : plane_offset / norm;
  if (d == 0.0) {
    fail(ErrorCode::kInvalidCamera, "ground plane passes through the camera center");
  }
  if (d > 0.0) {
    n = -n;
    d = -d;
  }

  CameraModel cam;
  cam.K_ = intrinsics;
  cam.K_inv_ = intrinsics.inverse();
  cam.normal_ = n;
  cam.offset_ = d;
  cam.width_ = width;
  cam.height_ = height;
  cam.ground_origin_ = -d * n;

  Vec3 u = Vec3::UnitX() - n.x() * n;
  if (u.norm() < 1e-6) {
    u = Vec3::UnitZ() - n.z() * n;
  }
  cam.ground_u_ = u.normalized();
  cam.ground_v_ = cam.ground_u_.cross(n).normalized();
  return cam;
}

Vec2 CameraModel::to_ground(const Vec3& X) const {
  const Vec3 rel = X - ground_origin_;
  return {rel.dot(ground_u_), rel.dot(ground_v_)};
}

Vec3 CameraModel::from_ground(const Vec2& g) const {
  return ground_origin_ + g.x() * ground_u_ + g.y() * ground_v_;
}

CameraModel CameraModel::scaled(double s) const {
  Mat3 K = K_;
  K(0, 0) *= s;
  K(1, 1) *= s;
  K(0, 2) *= s;
  K(1, 2) *= s;
  const int w = std::max(1, static_cast<int>(std::lround(width_ * s)));
  const int h = std::max(1, static_cast<int>(std::lround(height_ * s)));
  return create(K, normal_, offset_, w, h);
}

RigidPose::RigidPose(const Eigen::Quaterniond& rotation, const Vec3& translation) : t_(translation) {
  // Renormalizing a unit quaternion can flip last bits; keep it as given so
  // serialized poses read back unchanged.
  const double norm = rotation.norm();
  q_ = std::abs(norm - 1.0) <= 8.0 * std::numeric_limits<double>::epsilon() ? rotation : rotation.normalized();
}

RigidPose RigidPose::from_matrix(const Mat3& rotation, const Vec3& translation) {
  const Mat3 err = rotation.transpose() * rotation - Mat3::Identity();
  if (!rotation.allFinite() || err.cwiseAbs().maxCoeff() > 1e-6 ||
      std::abs(rotation.determinant() - 1.0) > 1e-6) {
    fail(ErrorCode::kInvalidArgument, "matrix is not a rotation");
  }
  return {Eigen::Quaterniond(rotation), translation};
}

RigidPose RigidPose::compose(const RigidPose& other) const {
  return {(q_ * other.q_).normalized(), q_ * other.t_ + t_};
}

RigidPose RigidPose::inverse() const {
  const Eigen::Quaterniond qi = q_.conjugate();
  return {qi, -(qi * t_)};
}

Pixel project(const CameraModel& camera, const Vec3& point) {
  if (!(point.z() > 1e-9)) {
    std::ostringstream msg;
    msg << "point depth " << point.z() << " is not in front of the camera";
    fail(ErrorCode::kNonPositiveDepth, msg.str());
  }
  const double x = point.x() / point.z();
  const double y = point.y() / point.z();
  return {camera.fx() * x + camera.cx(), camera.fy() * y + camera.cy()};
}

Vec3 backproject_ray(const CameraModel& camera, Pixel pixel) {
  return (camera.intrinsics_inverse() * Vec3(pixel.u, pixel.v, 1.0)).normalized();
}

double ground_depth(const CameraModel& camera, Pixel pixel) {
  const Vec3 ray = camera.intrinsics_inverse() * Vec3(pixel.u, pixel.v, 1.0);
  const double denom = camera.plane_normal().dot(ray);
  if (std::abs(denom) < 1e-12) {
    fail(ErrorCode::kRayParallelToPlane, "viewing ray is parallel to the ground plane");
  }
  const double z = -camera.plane_offset() / denom;
  if (!(z > 0.0)) {
    fail(ErrorCode::kPointBehindCamera, "ground intersection lies behind the camera");
  }
  return z;
}

Vec3 ground_point(const CameraModel& camera, Pixel pixel) {
  const double z = ground_depth(camera, pixel);
  return z * (camera.intrinsics_inverse() * Vec3(pixel.u, pixel.v, 1.0));
}

Mat3 skew(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return m;
}

Mat3 exp_so3(const Vec3& w) {
  const double theta = w.norm();
  if (theta < 1e-12) {
    return Mat3::Identity() + skew(w);
  }
  return Eigen::AngleAxisd(theta, w / theta).toRotationMatrix();
}

double rotation_angle(const Mat3& a, const Mat3& b) {
  // atan2 form of arccos((tr(a^T b) - 1) / 2); accurate near 0 and pi.
  const Mat3 m = a.transpose() * b;
  const Vec3 axis(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
  const double s = 0.5 * axis.norm();
  const double c = 0.5 * (m.trace() - 1.0);
  return std::atan2(s, c);
}

Mat3 upright_rotation(const CameraModel& camera, const Vec3& heading) {
  const Vec3& n = camera.plane_normal();
  Vec3 z = heading - heading.dot(n) * n;
  if (z.norm() < 1e-12) {
    fail(ErrorCode::kInvalidArgument, "heading is parallel to the ground normal");
  }
  z.normalize();
  const Vec3 y = -n;
  const Vec3 x = y.cross(z);
  Mat3 R;
  R.col(0) = x;
  R.col(1) = y;
  R.col(2) = z;
  return R;
}

}  // namespace clipart
