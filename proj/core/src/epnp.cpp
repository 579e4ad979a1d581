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

#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "clipart/error.hpp"
#include "clipart/pose_fit.hpp"

namespace clipart {
namespace {

using Vec12 = Eigen::Matrix<double, 12, 1>;
using Vec4 = Eigen::Vector4d;
using L6x10 = Eigen::Matrix<double, 6, 10>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

// Rigid alignment camera_points ~ R * world_points + t (no scale).
void align_rigid(const std::vector<Vec3>& world, const std::vector<Vec3>& cam, Mat3* R, Vec3* t) {
  Vec3 wc = Vec3::Zero();
  Vec3 cc = Vec3::Zero();
  for (std::size_t i = 0; i < world.size(); ++i) {
    wc += world[i];
    cc += cam[i];
  }
  wc /= double(world.size());
  cc /= double(world.size());
  Mat3 cov = Mat3::Zero();
  for (std::size_t i = 0; i < world.size(); ++i) cov += (cam[i] - cc) * (world[i] - wc).transpose();
  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 D = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) D(2, 2) = -1.0;
  *R = svd.matrixU() * D * svd.matrixV().transpose();
  *t = cc - *R * wc;
}

double reprojection_sq_error(const std::vector<Vec3>& world, const std::vector<Vec2>& image,
                             const Mat3& R, const Vec3& t) {
  double err = 0.0;
  for (std::size_t i = 0; i < world.size(); ++i) {
    const Vec3 pc = R * world[i] + t;
    if (!(pc.z() > 1e-9)) return std::numeric_limits<double>::infinity();
    err += (pc.head<2>() / pc.z() - image[i]).squaredNorm();
  }
  return err;
}

class EpnpSolver {
 public:
  EpnpSolver(const std::vector<Vec3>& world, const std::vector<Vec2>& image)
      : world_(world), image_(image) {}

  // Returns false when the points are (nearly) coplanar.
  bool solve(Mat3* R, Vec3* t) {
    if (!choose_control_points()) return false;
    compute_barycentric();

    Eigen::MatrixXd M(2 * world_.size(), 12);
    for (std::size_t i = 0; i < world_.size(); ++i) {
      const double u = image_[i].x();
      const double v = image_[i].y();
      for (int j = 0; j < 4; ++j) {
        const double a = alphas_[i][std::size_t(j)];
        M.block<1, 3>(Eigen::Index(2 * i), 3 * j) << a, 0.0, -a * u;
        M.block<1, 3>(Eigen::Index(2 * i + 1), 3 * j) << 0.0, a, -a * v;
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    for (int k = 0; k < 4; ++k) null_[std::size_t(k)] = svd.matrixV().col(11 - k);

    const L6x10 L = compute_l6x10();
    const Vec6 rho = compute_rho();

    double best = std::numeric_limits<double>::infinity();
    for (int variant = 1; variant <= 3; ++variant) {
      Vec4 betas = Vec4::Zero();
      if (variant == 1) betas = approx_betas_1(L, rho);
      if (variant == 2) betas = approx_betas_2(L, rho);
      if (variant == 3) betas = approx_betas_3(L, rho);
      gauss_newton(L, rho, &betas);
      Mat3 Rc;
      Vec3 tc;
      const double err = pose_from_betas(betas, &Rc, &tc);
      if (err < best) {
        best = err;
        *R = Rc;
        *t = tc;
      }
    }
    return std::isfinite(best);
  }

 private:
  bool choose_control_points() {
    Vec3 c0 = Vec3::Zero();
    for (const Vec3& p : world_) c0 += p;
    c0 /= double(world_.size());
    Mat3 cov = Mat3::Zero();
    for (const Vec3& p : world_) cov += (p - c0) * (p - c0).transpose();
    Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
    const Vec3 lambda = eig.eigenvalues();  // ascending
    if (!(lambda(0) > 1e-10 * lambda(2))) return false;
    controls_[0] = c0;
    for (int k = 0; k < 3; ++k) {
      const int col = 2 - k;
      controls_[std::size_t(k + 1)] =
          c0 + std::sqrt(lambda(col) / double(world_.size())) * eig.eigenvectors().col(col);
    }
    return true;
  }

  void compute_barycentric() {
    Mat3 C;
    for (int k = 0; k < 3; ++k) C.col(k) = controls_[std::size_t(k + 1)] - controls_[0];
    const Mat3 Cinv = C.inverse();
    alphas_.resize(world_.size());
    for (std::size_t i = 0; i < world_.size(); ++i) {
      const Vec3 a = Cinv * (world_[i] - controls_[0]);
      alphas_[i] = {1.0 - a.sum(), a(0), a(1), a(2)};
    }
  }

  L6x10 compute_l6x10() const {
    static constexpr std::array<std::pair<int, int>, 6> kPairs = {
        {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
    L6x10 L;
    for (int p = 0; p < 6; ++p) {
      const auto [a, b] = kPairs[std::size_t(p)];
      std::array<Vec3, 4> dv;
      for (int k = 0; k < 4; ++k) {
        dv[std::size_t(k)] = null_[std::size_t(k)].segment<3>(3 * a) - null_[std::size_t(k)].segment<3>(3 * b);
      }
      L(p, 0) = dv[0].dot(dv[0]);
      L(p, 1) = 2.0 * dv[0].dot(dv[1]);
      L(p, 2) = dv[1].dot(dv[1]);
      L(p, 3) = 2.0 * dv[0].dot(dv[2]);
      L(p, 4) = 2.0 * dv[1].dot(dv[2]);
      L(p, 5) = dv[2].dot(dv[2]);
      L(p, 6) = 2.0 * dv[0].dot(dv[3]);
      L(p, 7) = 2.0 * dv[1].dot(dv[3]);
      L(p, 8) = 2.0 * dv[2].dot(dv[3]);
      L(p, 9) = dv[3].dot(dv[3]);
    }
    return L;
  }

  Vec6 compute_rho() const {
    Vec6 rho;
    rho << (controls_[0] - controls_[1]).squaredNorm(), (controls_[0] - controls_[2]).squaredNorm(),
        (controls_[0] - controls_[3]).squaredNorm(), (controls_[1] - controls_[2]).squaredNorm(),
        (controls_[1] - controls_[3]).squaredNorm(), (controls_[2] - controls_[3]).squaredNorm();
    return rho;
  }

  // Product-term layout: [b11 b12 b22 b13 b23 b33 b14 b24 b34 b44].
  static Vec4 approx_betas_1(const L6x10& L, const Vec6& rho) {
    Eigen::Matrix<double, 6, 4> A;
    A << L.col(0), L.col(1), L.col(3), L.col(6);
    const Vec4 b = A.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(rho);
    Vec4 betas;
    const double s = b(0) < 0.0 ? -1.0 : 1.0;
    betas(0) = std::sqrt(std::abs(b(0)));
    const double denom = betas(0) != 0.0 ? betas(0) : 1.0;
    betas(1) = s * b(1) / denom;
    betas(2) = s * b(2) / denom;
    betas(3) = s * b(3) / denom;
    return betas;
  }

  static Vec4 approx_betas_2(const L6x10& L, const Vec6& rho) {
    Eigen::Matrix<double, 6, 3> A;
    A << L.col(0), L.col(1), L.col(2);
    const Vec3 b = A.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(rho);
    Vec4 betas = Vec4::Zero();
    if (b(0) < 0.0) {
      betas(0) = std::sqrt(-b(0));
      betas(1) = b(2) < 0.0 ? std::sqrt(-b(2)) : 0.0;
    } else {
      betas(0) = std::sqrt(b(0));
      betas(1) = b(2) > 0.0 ? std::sqrt(b(2)) : 0.0;
    }
    if (b(1) < 0.0) betas(0) = -betas(0);
    return betas;
  }

  static Vec4 approx_betas_3(const L6x10& L, const Vec6& rho) {
    const Eigen::Matrix<double, 6, 5> A = L.leftCols<5>();
    const Eigen::Matrix<double, 5, 1> b =
        A.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(rho);
    Vec4 betas = Vec4::Zero();
    if (b(0) < 0.0) {
      betas(0) = std::sqrt(-b(0));
      betas(1) = b(2) < 0.0 ? std::sqrt(-b(2)) : 0.0;
    } else {
      betas(0) = std::sqrt(b(0));
      betas(1) = b(2) > 0.0 ? std::sqrt(b(2)) : 0.0;
    }
    if (b(1) < 0.0) betas(0) = -betas(0);
    betas(2) = betas(0) != 0.0 ? b(3) / betas(0) : 0.0;
    return betas;
  }

  static void gauss_newton(const L6x10& L, const Vec6& rho, Vec4* betas) {
    for (int iter = 0; iter < 5; ++iter) {
      const Vec4& b = *betas;
      Eigen::Matrix<double, 10, 1> prod;
      prod << b(0) * b(0), b(0) * b(1), b(1) * b(1), b(0) * b(2), b(1) * b(2), b(2) * b(2),
          b(0) * b(3), b(1) * b(3), b(2) * b(3), b(3) * b(3);
      Eigen::Matrix<double, 6, 4> J;
      for (int i = 0; i < 6; ++i) {
        J(i, 0) = 2 * L(i, 0) * b(0) + L(i, 1) * b(1) + L(i, 3) * b(2) + L(i, 6) * b(3);
        J(i, 1) = L(i, 1) * b(0) + 2 * L(i, 2) * b(1) + L(i, 4) * b(2) + L(i, 7) * b(3);
        J(i, 2) = L(i, 3) * b(0) + L(i, 4) * b(1) + 2 * L(i, 5) * b(2) + L(i, 8) * b(3);
        J(i, 3) = L(i, 6) * b(0) + L(i, 7) * b(1) + L(i, 8) * b(2) + 2 * L(i, 9) * b(3);
      }
      const Vec6 residual = rho - L * prod;
      *betas += J.colPivHouseholderQr().solve(residual);
    }
  }

  double pose_from_betas(const Vec4& betas, Mat3* R, Vec3* t) const {
    std::array<Vec3, 4> cam_controls;
    for (int j = 0; j < 4; ++j) {
      cam_controls[std::size_t(j)] = Vec3::Zero();
      for (int k = 0; k < 4; ++k) {
        cam_controls[std::size_t(j)] += betas(k) * null_[std::size_t(k)].segment<3>(3 * j);
      }
    }
    std::vector<Vec3> cam(world_.size());
    double z_sum = 0.0;
    for (std::size_t i = 0; i < world_.size(); ++i) {
      cam[i] = Vec3::Zero();
      for (int j = 0; j < 4; ++j) cam[i] += alphas_[i][std::size_t(j)] * cam_controls[std::size_t(j)];
      z_sum += cam[i].z();
    }
    if (z_sum < 0.0) {
      for (Vec3& p : cam) p = -p;
    }
    align_rigid(world_, cam, R, t);
    return reprojection_sq_error(world_, image_, *R, *t);
  }

  const std::vector<Vec3>& world_;
  const std::vector<Vec2>& image_;
  std::array<Vec3, 4> controls_;
  std::vector<std::array<double, 4>> alphas_;
  std::array<Vec12, 4> null_;
};

// Similarity transform bringing points to zero mean and mean distance sqrt(2).
Mat3 normalizing_transform(const std::vector<Vec2>& pts) {
  Vec2 c = Vec2::Zero();
  for (const Vec2& p : pts) c += p;
  c /= double(pts.size());
  double mean_dist = 0.0;
  for (const Vec2& p : pts) mean_dist += (p - c).norm();
  mean_dist /= double(pts.size());
  const double s = mean_dist > 0.0 ? std::sqrt(2.0) / mean_dist : 1.0;
  Mat3 T;
  T << s, 0.0, -s * c.x(), 0.0, s, -s * c.y(), 0.0, 0.0, 1.0;
  return T;
}

bool planar_pose(const std::vector<Vec3>& world, const std::vector<Vec2>& image, Mat3* R, Vec3* t) {
  Vec3 c0 = Vec3::Zero();
  for (const Vec3& p : world) c0 += p;
  c0 /= double(world.size());
  Mat3 cov = Mat3::Zero();
  for (const Vec3& p : world) cov += (p - c0) * (p - c0).transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  const Vec3 lambda = eig.eigenvalues();
  if (!(lambda(1) > 1e-10 * lambda(2))) return false;  // collinear
  const Vec3 ea = eig.eigenvectors().col(2);
  const Vec3 eb = eig.eigenvectors().col(1);
  Mat3 B;
  B.col(0) = ea;
  B.col(1) = eb;
  B.col(2) = ea.cross(eb);

  std::vector<Vec2> plane(world.size());
  for (std::size_t i = 0; i < world.size(); ++i) {
    const Vec3 rel = B.transpose() * (world[i] - c0);
    plane[i] = rel.head<2>();
  }
  const Mat3 Tp = normalizing_transform(plane);
  const Mat3 Ti = normalizing_transform(image);
  Eigen::MatrixXd A(2 * world.size(), 9);
  for (std::size_t i = 0; i < world.size(); ++i) {
    const Vec3 p = Tp * Vec3(plane[i].x(), plane[i].y(), 1.0);
    const Vec3 q = Ti * Vec3(image[i].x(), image[i].y(), 1.0);
    const auto r = Eigen::Index(2 * i);
    A.row(r) << 0, 0, 0, -q.z() * p.x(), -q.z() * p.y(), -q.z() * p.z(), q.y() * p.x(), q.y() * p.y(), q.y() * p.z();
    A.row(r + 1) << q.z() * p.x(), q.z() * p.y(), q.z() * p.z(), 0, 0, 0, -q.x() * p.x(), -q.x() * p.y(), -q.x() * p.z();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(7) > 1e-12 * sv(0))) return false;
  const Eigen::Matrix<double, 9, 1> h = svd.matrixV().col(8);
  Mat3 Hn;
  Hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  const Mat3 H = Ti.inverse() * Hn * Tp;

  double lambda_scale = 2.0 / (H.col(0).norm() + H.col(1).norm());
  if ((lambda_scale * H.col(2)).z() < 0.0) lambda_scale = -lambda_scale;
  Mat3 Rh;
  Rh.col(0) = lambda_scale * H.col(0);
  Rh.col(1) = lambda_scale * H.col(1);
  Rh.col(2) = Rh.col(0).cross(Rh.col(1));
  Eigen::JacobiSVD<Mat3> orth(Rh, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 D = Mat3::Identity();
  if ((orth.matrixU() * orth.matrixV().transpose()).determinant() < 0.0) D(2, 2) = -1.0;
  Rh = orth.matrixU() * D * orth.matrixV().transpose();
  const Vec3 th = lambda_scale * H.col(2);

  *R = Rh * B.transpose();
  *t = th - *R * c0;
  return R->allFinite() && t->allFinite();
}

}  // namespace

std::vector<int> pnp_indices(const Keypoints2D& keypoints) {
  std::vector<int> idx;
  for (int i = 0; i < keypoints.size(); ++i) {
    const Visibility v = keypoints.visibility[std::size_t(i)];
    if (v != Visibility::kMissing && v != Visibility::kOccludedByOthers) idx.push_back(i);
  }
  return idx;
}

RigidPose epnp(const CameraModel& camera, const PointMatrix3& object_points,
               const Keypoints2D& keypoints, int min_points) {
  keypoints.validate();
  if (object_points.rows() != keypoints.size()) {
    fail(ErrorCode::kDimensionMismatch, "3D and 2D keypoint counts differ");
  }
  const std::vector<int> idx = pnp_indices(keypoints);
  const std::size_t needed = std::size_t(std::max(4, min_points));
  if (idx.size() < needed) {
    fail(ErrorCode::kTooFewPoints, "EPnP needs " + std::to_string(needed) + " usable keypoints, got " +
                                       std::to_string(idx.size()));
  }
  std::vector<Vec3> world;
  std::vector<Vec2> image;
  for (int i : idx) {
    world.push_back(object_points.row(i).transpose());
    const Vec3 m = camera.intrinsics_inverse() * Vec3(keypoints.points(i, 0), keypoints.points(i, 1), 1.0);
    image.push_back(m.head<2>());
  }

  Mat3 R;
  Vec3 t;
  EpnpSolver solver(world, image);
  if (!solver.solve(&R, &t) && !planar_pose(world, image, &R, &t)) {
    fail(ErrorCode::kDegenerateConfiguration, "keypoints are collinear or the homography is singular");
  }
  return RigidPose::from_matrix(R, t);
}

}  // namespace clipart
