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

#include "clipart/pose_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "clipart/error.hpp"

namespace clipart {

double keypoint_weight(Visibility visibility, double confidence) {
  switch (visibility) {
    case Visibility::kVisible:
      return confidence;
    case Visibility::kSelfOccluded:
      return 0.5 * confidence;
    case Visibility::kOccludedByOthers:
    case Visibility::kMissing:
      return 0.0;
  }
  return 0.0;
}

ShapePoseProblem::ShapePoseProblem(const CameraModel& camera, const ShapeBasis& basis,
                                   std::vector<Keypoints2D> frames, double ground_weight,
                                   double prior_weight)
    : camera_(&camera),
      basis_(&basis),
      frames_(std::move(frames)),
      ground_weight_(ground_weight),
      prior_weight_(prior_weight) {
  if (frames_.empty()) fail(ErrorCode::kEmptyTrack, "no frames to fit");
  for (const Keypoints2D& kp : frames_) {
    kp.validate();
    if (kp.size() != basis.num_keypoints()) {
      fail(ErrorCode::kDimensionMismatch, "keypoint count " + std::to_string(kp.size()) +
                                              " differs from shape basis (" +
                                              std::to_string(basis.num_keypoints()) + ")");
    }
    std::vector<double> w(std::size_t(kp.size()));
    for (int i = 0; i < kp.size(); ++i) {
      w[std::size_t(i)] = keypoint_weight(kp.visibility[std::size_t(i)], kp.confidence[std::size_t(i)]);
    }
    weights_.push_back(std::move(w));
  }
  if (!(ground_weight_ >= 0.0) || !(prior_weight_ >= 0.0)) {
    fail(ErrorCode::kInvalidArgument, "fit weights must be non-negative");
  }
}

int ShapePoseProblem::num_parameters() const {
  return 6 * num_frames() + basis_->num_components();
}

int ShapePoseProblem::num_residuals() const {
  const int contacts = ground_weight_ > 0.0 ? int(basis_->contact_indices().size()) : 0;
  return num_frames() * (2 * basis_->num_keypoints() + contacts) + basis_->num_components();
}

int ShapePoseProblem::degrees_of_freedom() const {
  int used = 0;
  for (const auto& w : weights_) {
    for (double v : w) used += v > 0.0 ? 2 : 0;
  }
  return used - num_parameters();
}

bool ShapePoseProblem::residuals(const State& state, Eigen::VectorXd* r) const {
  return linearize(state, r, nullptr);
}

bool ShapePoseProblem::linearize(const State& state, Eigen::VectorXd* r,
                                 Eigen::MatrixXd* jacobian) const {
  const int n = basis_->num_keypoints();
  const int k = basis_->num_components();
  const PointMatrix3 X = instantiate(*basis_, ShapeCoefficients{state.alpha});
  const std::vector<int>& contacts = basis_->contact_indices();
  const bool use_ground = ground_weight_ > 0.0;
  const double sg = std::sqrt(ground_weight_);
  const Vec3& normal = camera_->plane_normal();

  r->setZero(num_residuals());
  if (jacobian) jacobian->setZero(num_residuals(), num_parameters());
  const int alpha_col = 6 * num_frames();

  int row = 0;
  for (int f = 0; f < num_frames(); ++f) {
    const Mat3 R = state.poses[std::size_t(f)].rotation_matrix();
    const Vec3& t = state.poses[std::size_t(f)].translation();
    const Keypoints2D& kp = frames_[std::size_t(f)];
    for (int i = 0; i < n; ++i, row += 2) {
      const double w = weights_[std::size_t(f)][std::size_t(i)];
      if (w == 0.0) continue;
      const Vec3 rx = R * X.row(i).transpose();
      const Vec3 pc = rx + t;
      if (!(pc.z() > 1e-9)) return false;
      const double sw = std::sqrt(w);
      const double iz = 1.0 / pc.z();
      (*r)(row) = sw * (camera_->fx() * pc.x() * iz + camera_->cx() - kp.points(i, 0));
      (*r)(row + 1) = sw * (camera_->fy() * pc.y() * iz + camera_->cy() - kp.points(i, 1));
      if (!jacobian) continue;
      Eigen::Matrix<double, 2, 3> dproj;
      dproj << camera_->fx() * iz, 0.0, -camera_->fx() * pc.x() * iz * iz,
          0.0, camera_->fy() * iz, -camera_->fy() * pc.y() * iz * iz;
      dproj *= sw;
      jacobian->block<2, 3>(row, 6 * f) = -dproj * skew(rx);
      jacobian->block<2, 3>(row, 6 * f + 3) = dproj;
      for (int c = 0; c < k; ++c) {
        const Vec3 dq = R * basis_->components()[std::size_t(c)].row(i).transpose();
        jacobian->block<2, 1>(row, alpha_col + c) = dproj * dq;
      }
    }
    if (!use_ground) continue;
    for (int j : contacts) {
      const Vec3 rx = R * X.row(j).transpose();
      (*r)(row) = sg * camera_->plane_residual(rx + t);
      if (jacobian) {
        jacobian->block<1, 3>(row, 6 * f) = -sg * normal.transpose() * skew(rx);
        jacobian->block<1, 3>(row, 6 * f + 3) = sg * normal.transpose();
        for (int c = 0; c < k; ++c) {
          const Vec3 dq = R * basis_->components()[std::size_t(c)].row(j).transpose();
          (*jacobian)(row, alpha_col + c) = sg * normal.dot(dq);
        }
      }
      ++row;
    }
  }
  const double sp = std::sqrt(prior_weight_);
  for (int c = 0; c < k; ++c, ++row) {
    const double inv_sigma = 1.0 / basis_->scales()(c);
    (*r)(row) = sp * state.alpha(c) * inv_sigma;
    if (jacobian) (*jacobian)(row, alpha_col + c) = sp * inv_sigma;
  }
  return true;
}

ShapePoseProblem::State ShapePoseProblem::retract(const State& state, const Eigen::VectorXd& delta,
                                                  bool clamp) const {
  State out;
  out.poses.reserve(state.poses.size());
  for (int f = 0; f < num_frames(); ++f) {
    const RigidPose& p = state.poses[std::size_t(f)];
    const Vec3 dw = delta.segment<3>(6 * f);
    const Vec3 dt = delta.segment<3>(6 * f + 3);
    const double angle = dw.norm();
    Eigen::Quaterniond dq = Eigen::Quaterniond::Identity();
    if (angle > 0.0) dq = Eigen::Quaterniond(Eigen::AngleAxisd(angle, dw / angle));
    out.poses.emplace_back((dq * p.rotation()).normalized(), p.translation() + dt);
  }
  out.alpha = state.alpha + delta.tail(basis_->num_components());
  if (clamp) out.alpha = clamp_coefficients(*basis_, ShapeCoefficients{out.alpha}).alpha;
  return out;
}

double ShapePoseProblem::reprojection_cost(const State& state) const {
  const PointMatrix3 X = instantiate(*basis_, ShapeCoefficients{state.alpha});
  double cost = 0.0;
  for (int f = 0; f < num_frames(); ++f) {
    const RigidPose& pose = state.poses[std::size_t(f)];
    const Keypoints2D& kp = frames_[std::size_t(f)];
    for (int i = 0; i < kp.size(); ++i) {
      const double w = weights_[std::size_t(f)][std::size_t(i)];
      if (w == 0.0) continue;
      const Pixel px = project(*camera_, pose.apply(X.row(i).transpose()));
      cost += w * (Vec2(px.u, px.v) - kp.points.row(i).transpose()).squaredNorm();
    }
  }
  return cost;
}

double ShapePoseProblem::frame_rms(const State& state, int frame, int* n_used, int* n_inliers,
                                   double inlier_threshold) const {
  const PointMatrix3 X = instantiate(*basis_, ShapeCoefficients{state.alpha});
  const RigidPose& pose = state.poses[std::size_t(frame)];
  const Keypoints2D& kp = frames_[std::size_t(frame)];
  double sum = 0.0;
  int used = 0;
  int inliers = 0;
  for (int i = 0; i < kp.size(); ++i) {
    if (weights_[std::size_t(frame)][std::size_t(i)] == 0.0) continue;
    const Vec3 pc = pose.apply(X.row(i).transpose());
    if (!(pc.z() > 1e-9)) continue;
    const Pixel px = project(*camera_, pc);
    const double e = (Vec2(px.u, px.v) - kp.points.row(i).transpose()).norm();
    sum += e * e;
    ++used;
    if (e <= inlier_threshold) ++inliers;
  }
  if (n_used) *n_used = used;
  if (n_inliers) *n_inliers = inliers;
  return used > 0 ? std::sqrt(sum / used) : 0.0;
}

namespace {

struct SolveResult {
  ShapePoseProblem::State state;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

double squared(const Eigen::VectorXd& r) { return r.squaredNorm(); }

// Levenberg-Marquardt with the damping schedule mu0 = 1e-3 max diag(J^T J),
// x2 on rejection, /3 on acceptance.
SolveResult levenberg_marquardt(const ShapePoseProblem& problem, ShapePoseProblem::State state,
                                const FitOptions& options) {
  SolveResult out;
  Eigen::VectorXd r;
  Eigen::MatrixXd J;
  if (!problem.linearize(state, &r, &J)) {
    fail(ErrorCode::kNonPositiveDepth, "initial pose puts a weighted keypoint behind the camera");
  }
  double cost = squared(r);
  if (!std::isfinite(cost)) fail(ErrorCode::kDivergedOptimization, "initial cost is not finite");
  out.history.push_back(cost);

  double mu = -1.0;
  bool relinearize = false;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (cost == 0.0) {
      out.converged = true;
      break;
    }
    if (relinearize) problem.linearize(state, &r, &J);
    relinearize = false;
    const Eigen::MatrixXd H = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    if (mu < 0.0) mu = 1e-3 * H.diagonal().maxCoeff();
    if (!(mu > 0.0)) mu = 1e-12;
    out.iterations = iter + 1;

    bool accepted = false;
    bool stop = false;
    for (int attempt = 0; attempt < 64 && !accepted; ++attempt) {
      Eigen::MatrixXd A = H;
      A.diagonal().array() += mu;
      const Eigen::VectorXd delta = A.ldlt().solve(-g);
      if (!delta.allFinite()) fail(ErrorCode::kDivergedOptimization, "non-finite LM step");
      if (delta.norm() < options.step_tolerance) {
        stop = true;
        break;
      }
      ShapePoseProblem::State trial = problem.retract(state, delta);
      Eigen::VectorXd r_trial;
      if (!problem.residuals(trial, &r_trial)) {
        mu *= 2.0;
        continue;
      }
      const double trial_cost = squared(r_trial);
      if (!std::isfinite(trial_cost)) {
        fail(ErrorCode::kDivergedOptimization, "cost became non-finite");
      }
      if (trial_cost < cost) {
        const double decrease = (cost - trial_cost) / cost;
        state = std::move(trial);
        cost = trial_cost;
        out.history.push_back(cost);
        mu /= 3.0;
        accepted = true;
        relinearize = true;
        if (decrease < options.relative_cost_tolerance) stop = true;
      } else {
        mu *= 2.0;
      }
    }
    if (stop || !accepted) {
      out.converged = true;
      break;
    }
  }
  if (cost == 0.0) out.converged = true;
  out.state = std::move(state);
  out.cost = cost;
  return out;
}

// Re-estimates the keypoint noise variance s^2 from the residuals and refits
// with prior weight lambda_s * s^2 until s^2 settles.
SolveResult solve_with_adaptive_prior(ShapePoseProblem& problem, ShapePoseProblem::State state,
                                      const FitOptions& options) {
  const int dof = problem.degrees_of_freedom();
  auto noise_variance = [&](const ShapePoseProblem::State& s) {
    if (dof <= 0) return 1.0;
    return problem.reprojection_cost(s) / dof;
  };
  double s2 = noise_variance(state);
  SolveResult result;
  const int rounds = std::max(1, options.max_noise_rounds);
  for (int round = 0; round < rounds; ++round) {
    problem.set_prior_weight(options.shape_prior_weight * s2);
    result = levenberg_marquardt(problem, state, options);
    state = result.state;
    const double next = noise_variance(state);
    const bool settled = next < 1e-24 || std::abs(next - s2) <= 0.01 * s2;
    s2 = next;
    if (settled) break;
  }
  return result;
}

void check_initial_depths(const PointMatrix3& X, const RigidPose& pose, const Keypoints2D& keypoints) {
  for (int i = 0; i < keypoints.size(); ++i) {
    if (keypoint_weight(keypoints.visibility[std::size_t(i)], keypoints.confidence[std::size_t(i)]) == 0.0) {
      continue;
    }
    if (!(pose.apply(X.row(i).transpose()).z() > 1e-9)) {
      fail(ErrorCode::kNonPositiveDepth, "initial pose puts keypoint " + std::to_string(i) +
                                             " behind the camera");
    }
  }
}

FitResult frame_result(const ShapePoseProblem& problem, const SolveResult& solved, int frame,
                       const FitOptions& options) {
  FitResult fr;
  fr.pose = solved.state.poses[std::size_t(frame)];
  fr.coeffs = ShapeCoefficients{solved.state.alpha};
  int used = 0;
  fr.rms_reprojection_error =
      problem.frame_rms(solved.state, frame, &used, &fr.n_inlier_keypoints, options.inlier_threshold_px);
  fr.converged = solved.converged;
  fr.cost = solved.cost;
  fr.iterations = solved.iterations;
  fr.cost_history = solved.history;
  return fr;
}

}  // namespace

FitResult refine_pose(const CameraModel& camera, const ShapeBasis& basis,
                      const Keypoints2D& keypoints, const FitResult& init,
                      const FitOptions& options) {
  ShapeCoefficients coeffs = init.coeffs;
  if (coeffs.size() == 0 && basis.num_components() > 0) coeffs = ShapeCoefficients::zeros(basis.num_components());
  check_initial_depths(instantiate(basis, coeffs), init.pose, keypoints);
  ShapePoseProblem problem(camera, basis, {keypoints}, 0.0, 0.0);
  ShapePoseProblem::State state{{init.pose}, coeffs.alpha};
  const SolveResult solved = solve_with_adaptive_prior(problem, std::move(state), options);
  return frame_result(problem, solved, 0, options);
}

TrackFit fit_track(const CameraModel& camera, const ShapeBasis& basis, const ObjectTrack& track,
                   const FitOptions& options) {
  if (track.frames.empty()) {
    fail(ErrorCode::kEmptyTrack, "track " + std::to_string(track.track_id) + " has no frames");
  }
  std::vector<Keypoints2D> frames;
  ShapePoseProblem::State state;
  state.alpha = Eigen::VectorXd::Zero(basis.num_components());
  for (const TrackFrame& tf : track.frames) {
    state.poses.push_back(epnp(camera, basis.mean(), tf.keypoints, options.min_keypoints));
    check_initial_depths(basis.mean(), state.poses.back(), tf.keypoints);
    frames.push_back(tf.keypoints);
  }
  ShapePoseProblem problem(camera, basis, std::move(frames), options.ground_weight, 0.0);
  const SolveResult solved = solve_with_adaptive_prior(problem, std::move(state), options);
  TrackFit out;
  out.shared_coeffs = ShapeCoefficients{solved.state.alpha};
  for (int f = 0; f < problem.num_frames(); ++f) out.frames.push_back(frame_result(problem, solved, f, options));
  return out;
}

RigidPose place_on_ground(const CameraModel& camera, const Box& bbox, double object_height) {
  if (!(object_height > 0.0)) fail(ErrorCode::kInvalidArgument, "object height must be positive");
  const Pixel bottom{0.5 * (bbox.x0 + bbox.x1), bbox.y1};
  const Vec3 t = ground_point(camera, bottom);
  // Face the camera: object z axis toward the camera center, within the plane.
  Vec3 heading = -t;
  const Vec3& n = camera.plane_normal();
  if ((heading - heading.dot(n) * n).norm() < 1e-9) heading = -Vec3::UnitZ();
  return RigidPose::from_matrix(upright_rotation(camera, heading), t);
}

}  // namespace clipart
