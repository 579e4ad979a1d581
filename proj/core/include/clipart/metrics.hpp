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
#include <string>
#include <vector>

#include "clipart/geometry.hpp"
#include "clipart/image.hpp"
#include "clipart/types.hpp"

namespace clipart {

struct EvalObject {
  std::int64_t id = 0;
  ObjectClass cls = ObjectClass::kCar;
  double score = 1.0;
  Box bbox;
  std::optional<Mask> mask;
  Keypoints2D keypoints;
  std::optional<PointMatrix3> keypoints3d;  // camera frame
  std::optional<RigidPose> pose;
  double occlusion_fraction = 0.0;
};

struct EvalImage {
  std::int64_t image_id = 0;
  std::vector<EvalObject> objects;
};

// Predictions and ground truth, paired by image id. Images missing on one
// side count as empty.
struct EvalPair {
  std::vector<EvalImage> predictions;
  std::vector<EvalImage> ground_truth;
};

enum class IouMode { kBox, kMask };

double object_iou(const EvalObject& a, const EvalObject& b, IouMode mode);

struct Match {
  std::size_t image = 0;  // index into ground_truth
  std::size_t gt = 0;
  std::optional<std::size_t> prediction;  // index into the paired prediction image
  double iou = 0.0;
};

struct Matching {
  // One entry per ground-truth object, in ground-truth order.
  std::vector<Match> gt_matches;
  // (prediction image index, object index) of predictions left unmatched.
  std::vector<std::pair<std::size_t, std::size_t>> unmatched_predictions;
};

// Per image and class: predictions in descending score order (stable) each
// take the unmatched ground-truth object of highest IoU >= threshold.
Matching match_predictions(const EvalPair& pair, double iou_threshold, IouMode mode);

// COCO-style AP: greedy matching, 101-point interpolated precision,
// averaged over the classes present in the ground truth. Throws
// kEmptyGroundTruth.
double average_precision(const EvalPair& pair, double iou_threshold, IouMode mode);
// Mean AP over IoU thresholds 0.50:0.05:0.95.
double average_precision_sweep(const EvalPair& pair, IouMode mode);

// Fraction of annotated (non-missing) ground-truth keypoints within
// alpha * max(bbox width, height). Throws kNoAnnotatedKeypoints,
// kInvalidArgument for alpha outside (0, 1), kDimensionMismatch.
double pck(const PointMatrix2& pred, const Keypoints2D& gt, const Box& gt_bbox, double alpha);

// Mean joint distance after subtracting each cloud's root joint.
double mpjpe(const PointMatrix3& pred, const PointMatrix3& gt, int root_index);

struct PoseError {
  double rotation = 0.0;     // geodesic angle, radians
  double translation = 0.0;  // meters
};
PoseError pose_accuracy(const RigidPose& pred, const RigidPose& gt);

// Fraction of errors strictly below threshold; 0 for an empty list.
double accuracy_at(const std::vector<double>& errors, double threshold);
// NaN for an empty list.
double median(std::vector<double> values);

// Mean distance between model points under the two poses.
double add_metric(const RigidPose& pred, const RigidPose& gt, const PointMatrix3& model_points);

struct OcclusionBins {
  std::vector<double> edges = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  // Throws kInvalidArgument unless edges increase strictly from 0 to 1.
  void validate() const;
  std::size_t num_bins() const { return edges.size() - 1; }
  // Bin [e_k, e_k+1); the last bin also holds 1.
  std::size_t bin_of(double fraction) const;
};

enum class BinnedMetric {
  kApBox50,
  kApMask50,
  kPck10,
  kMpjpe,
  kAccPi6,
  kAccPi18,
  kMedianRotation,
};

std::string to_string(BinnedMetric metric);

struct BinRow {
  double lo = 0.0;
  double hi = 0.0;
  std::optional<double> value;  // empty bin or no usable pairs
  std::size_t n = 0;            // ground-truth objects in the bin
};

// Matches once at IoU 0.5 (box), then evaluates the metric per bin over the
// ground-truth objects in it. Missed objects score 0 for PCK and the
// accuracies and are skipped for MPJPE and median errors. For AP every
// unmatched prediction is a false positive in each bin.
std::vector<BinRow> binned_curves(const EvalPair& pair, const OcclusionBins& bins, BinnedMetric metric);

struct EvalReport {
  std::size_t n_gt = 0;
  std::size_t n_pred = 0;
  std::size_t n_matched = 0;
  double ap_box_50 = 0.0;
  double ap_box = 0.0;
  std::optional<double> ap_mask_50;
  std::optional<double> ap_mask;
  std::optional<double> pck_10;
  std::optional<double> mpjpe;
  std::optional<double> acc_pi6;
  std::optional<double> acc_pi18;
  std::optional<double> median_rotation;
  std::optional<double> median_translation;
  std::optional<double> median_add;
};

EvalReport evaluate(const EvalPair& pair);

}  // namespace clipart
