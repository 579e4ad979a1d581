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

#include "clipart/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "clipart/error.hpp"

namespace clipart {

double object_iou(const EvalObject& a, const EvalObject& b, IouMode mode) {
  if (mode == IouMode::kBox) return box_iou(a.bbox, b.bbox);
  if (!a.mask || !b.mask) fail(ErrorCode::kInvalidArgument, "mask IoU needs masks on both objects");
  return mask_iou(*a.mask, *b.mask);
}

namespace {

std::map<std::int64_t, std::size_t> index_by_id(const std::vector<EvalImage>& images) {
  std::map<std::int64_t, std::size_t> out;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!out.emplace(images[i].image_id, i).second) {
      fail(ErrorCode::kValidationError, "duplicate image id " + std::to_string(images[i].image_id));
    }
  }
  return out;
}

// Predictions of one image in descending score order, ties by input order.
std::vector<std::size_t> by_score(const std::vector<EvalObject>& objects) {
  std::vector<std::size_t> idx(objects.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return objects[a].score > objects[b].score; });
  return idx;
}

struct Scored {
  double score;
  bool tp;
};

// 101-point interpolated AP over entries already in global score order.
double interpolated_ap(const std::vector<Scored>& entries, std::size_t n_gt) {
  if (n_gt == 0) return 0.0;
  std::vector<double> precision(entries.size());
  std::vector<double> recall(entries.size());
  double tp = 0.0;
  double fp = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    (entries[i].tp ? tp : fp) += 1.0;
    precision[i] = tp / (tp + fp);
    recall[i] = tp / double(n_gt);
  }
  for (std::size_t i = precision.size(); i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);
  double sum = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double r = k / 100.0;
    const auto it = std::lower_bound(recall.begin(), recall.end(), r);
    if (it != recall.end()) sum += precision[std::size_t(it - recall.begin())];
  }
  return sum / 101.0;
}

struct PredRef {
  std::size_t image;
  std::size_t object;
};

// Global score order over all predictions: stable in (image, object) order.
std::vector<PredRef> global_order(const EvalPair& pair) {
  std::vector<PredRef> refs;
  for (std::size_t i = 0; i < pair.predictions.size(); ++i) {
    for (std::size_t j = 0; j < pair.predictions[i].objects.size(); ++j) refs.push_back({i, j});
  }
  std::stable_sort(refs.begin(), refs.end(), [&](const PredRef& a, const PredRef& b) {
    return pair.predictions[a.image].objects[a.object].score > pair.predictions[b.image].objects[b.object].score;
  });
  return refs;
}

// AP from a fixed matching. `keep_gt(image, gt)` selects the ground truth
// that counts; predictions matched to dropped ground truth are ignored.
template <typename Keep>
double ap_from_matching(const EvalPair& pair, const Matching& matching, Keep keep_gt) {
  const auto pred_index = index_by_id(pair.predictions);
  // (pred image, pred object) -> matched gt is kept?
  std::map<std::pair<std::size_t, std::size_t>, bool> matched;
  std::map<ObjectClass, std::size_t> n_gt;
  for (const Match& m : matching.gt_matches) {
    const bool keep = keep_gt(m.image, m.gt);
    if (keep) ++n_gt[pair.ground_truth[m.image].objects[m.gt].cls];
    if (m.prediction) {
      const std::size_t pi = pred_index.at(pair.ground_truth[m.image].image_id);
      matched[{pi, *m.prediction}] = keep;
    }
  }
  if (n_gt.empty()) return 0.0;
  const std::vector<PredRef> order = global_order(pair);
  double total = 0.0;
  for (const auto& [cls, count] : n_gt) {
    std::vector<Scored> entries;
    for (const PredRef& ref : order) {
      const EvalObject& p = pair.predictions[ref.image].objects[ref.object];
      if (p.cls != cls) continue;
      const auto it = matched.find({ref.image, ref.object});
      if (it == matched.end()) {
        entries.push_back({p.score, false});
      } else if (it->second) {
        entries.push_back({p.score, true});
      }
    }
    total += interpolated_ap(entries, count);
  }
  return total / double(n_gt.size());
}

std::size_t count_objects(const std::vector<EvalImage>& images) {
  std::size_t n = 0;
  for (const auto& im : images) n += im.objects.size();
  return n;
}

}  // namespace

Matching match_predictions(const EvalPair& pair, double iou_threshold, IouMode mode) {
  const auto pred_index = index_by_id(pair.predictions);
  index_by_id(pair.ground_truth);
  Matching out;
  std::set<std::size_t> seen_pred_images;
  for (std::size_t gi = 0; gi < pair.ground_truth.size(); ++gi) {
    const EvalImage& gimg = pair.ground_truth[gi];
    std::vector<std::optional<std::size_t>> gt_to_pred(gimg.objects.size());
    std::vector<double> gt_iou(gimg.objects.size(), 0.0);
    const auto it = pred_index.find(gimg.image_id);
    if (it != pred_index.end()) {
      seen_pred_images.insert(it->second);
      const EvalImage& pimg = pair.predictions[it->second];
      for (std::size_t p : by_score(pimg.objects)) {
        double best = iou_threshold;
        std::optional<std::size_t> best_gt;
        for (std::size_t g = 0; g < gimg.objects.size(); ++g) {
          if (gt_to_pred[g] || gimg.objects[g].cls != pimg.objects[p].cls) continue;
          const double iou = object_iou(pimg.objects[p], gimg.objects[g], mode);
          if (iou >= best && (!best_gt || iou > best)) {
            best = iou;
            best_gt = g;
          }
        }
        if (best_gt) {
          gt_to_pred[*best_gt] = p;
          gt_iou[*best_gt] = best;
        } else {
          out.unmatched_predictions.emplace_back(it->second, p);
        }
      }
    }
    for (std::size_t g = 0; g < gimg.objects.size(); ++g) {
      out.gt_matches.push_back({gi, g, gt_to_pred[g], gt_iou[g]});
    }
  }
  for (std::size_t pi = 0; pi < pair.predictions.size(); ++pi) {
    if (seen_pred_images.count(pi)) continue;
    for (std::size_t p = 0; p < pair.predictions[pi].objects.size(); ++p) {
      out.unmatched_predictions.emplace_back(pi, p);
    }
  }
  return out;
}

double average_precision(const EvalPair& pair, double iou_threshold, IouMode mode) {
  if (count_objects(pair.ground_truth) == 0) fail(ErrorCode::kEmptyGroundTruth, "no ground-truth objects");
  const Matching m = match_predictions(pair, iou_threshold, mode);
  return ap_from_matching(pair, m, [](std::size_t, std::size_t) { return true; });
}

double average_precision_sweep(const EvalPair& pair, IouMode mode) {
  double sum = 0.0;
  for (int k = 0; k < 10; ++k) sum += average_precision(pair, 0.5 + 0.05 * k, mode);
  return sum / 10.0;
}

double pck(const PointMatrix2& pred, const Keypoints2D& gt, const Box& gt_bbox, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::kInvalidArgument, "PCK alpha must lie in (0, 1)");
  if (pred.rows() != gt.size()) fail(ErrorCode::kDimensionMismatch, "keypoint counts differ");
  const double radius = alpha * std::max(gt_bbox.width(), gt_bbox.height());
  int annotated = 0;
  int correct = 0;
  for (int i = 0; i < gt.size(); ++i) {
    if (gt.visibility[std::size_t(i)] == Visibility::kMissing) continue;
    ++annotated;
    if ((pred.row(i) - gt.points.row(i)).norm() <= radius) ++correct;
  }
  if (annotated == 0) fail(ErrorCode::kNoAnnotatedKeypoints, "no annotated ground-truth keypoints");
  return double(correct) / double(annotated);
}

double mpjpe(const PointMatrix3& pred, const PointMatrix3& gt, int root_index) {
  if (pred.rows() != gt.rows() || pred.rows() == 0) {
    fail(ErrorCode::kDimensionMismatch, "joint counts differ or are zero");
  }
  if (root_index < 0 || root_index >= pred.rows()) fail(ErrorCode::kDimensionMismatch, "root index out of range");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < pred.rows(); ++j) {
    sum += ((pred.row(j) - pred.row(root_index)) - (gt.row(j) - gt.row(root_index))).norm();
  }
  return sum / double(pred.rows());
}

PoseError pose_accuracy(const RigidPose& pred, const RigidPose& gt) {
  return {rotation_angle(gt.rotation_matrix(), pred.rotation_matrix()),
          (pred.translation() - gt.translation()).norm()};
}

double accuracy_at(const std::vector<double>& errors, double threshold) {
  if (errors.empty()) return 0.0;
  const auto n = std::count_if(errors.begin(), errors.end(), [&](double e) { return e < threshold; });
  return double(n) / double(errors.size());
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double add_metric(const RigidPose& pred, const RigidPose& gt, const PointMatrix3& model_points) {
  if (model_points.rows() == 0) fail(ErrorCode::kInvalidArgument, "ADD needs at least one model point");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < model_points.rows(); ++i) {
    const Vec3 x = model_points.row(i).transpose();
    sum += (pred.apply(x) - gt.apply(x)).norm();
  }
  return sum / double(model_points.rows());
}

void OcclusionBins::validate() const {
  if (edges.size() < 2 || edges.front() != 0.0 || edges.back() != 1.0) {
    fail(ErrorCode::kInvalidArgument, "occlusion bin edges must run from 0 to 1");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) fail(ErrorCode::kInvalidArgument, "occlusion bin edges must increase");
  }
}

std::size_t OcclusionBins::bin_of(double fraction) const {
  const auto it = std::upper_bound(edges.begin(), edges.end(), fraction);
  const auto k = std::size_t(std::max<std::ptrdiff_t>(1, it - edges.begin())) - 1;
  return std::min(k, num_bins() - 1);
}

std::string to_string(BinnedMetric metric) {
  switch (metric) {
    case BinnedMetric::kApBox50: return "ap_box_50";
    case BinnedMetric::kApMask50: return "ap_mask_50";
    case BinnedMetric::kPck10: return "pck_10";
    case BinnedMetric::kMpjpe: return "mpjpe";
    case BinnedMetric::kAccPi6: return "acc_pi6";
    case BinnedMetric::kAccPi18: return "acc_pi18";
    case BinnedMetric::kMedianRotation: return "median_rotation";
  }
  return "unknown";
}

namespace {

struct PerObject {
  std::optional<double> pck;
  std::optional<double> mpjpe;
  std::optional<double> rotation;
  std::optional<double> translation;
  std::optional<double> add;
  bool matched = false;
  bool has_keypoints = false;
  bool has_pose = false;
};

PerObject per_object(const EvalPair& pair, const Match& m) {
  PerObject out;
  const EvalObject& g = pair.ground_truth[m.image].objects[m.gt];
  out.has_pose = g.pose.has_value();
  out.has_keypoints = std::any_of(g.keypoints.visibility.begin(), g.keypoints.visibility.end(),
                                  [](Visibility v) { return v != Visibility::kMissing; });
  if (!m.prediction) return out;
  out.matched = true;
  const auto pred_index = index_by_id(pair.predictions);
  const EvalObject& p = pair.predictions[pred_index.at(pair.ground_truth[m.image].image_id)].objects[*m.prediction];
  if (out.has_keypoints && p.keypoints.size() == g.keypoints.size()) {
    out.pck = pck(p.keypoints.points, g.keypoints, g.bbox, 0.1);
  }
  if (g.keypoints3d && p.keypoints3d && g.keypoints3d->rows() > 0 && g.keypoints3d->rows() == p.keypoints3d->rows()) {
    out.mpjpe = mpjpe(*p.keypoints3d, *g.keypoints3d, 0);
  }
  if (g.pose && p.pose) {
    const PoseError e = pose_accuracy(*p.pose, *g.pose);
    out.rotation = e.rotation;
    out.translation = e.translation;
    if (g.keypoints3d && g.keypoints3d->rows() > 0) {
      // Model points: ground-truth keypoints in the object frame.
      const RigidPose inv = g.pose->inverse();
      PointMatrix3 model(g.keypoints3d->rows(), 3);
      for (Eigen::Index i = 0; i < model.rows(); ++i) {
        model.row(i) = inv.apply(g.keypoints3d->row(i).transpose()).transpose();
      }
      out.add = add_metric(*p.pose, *g.pose, model);
    }
  }
  return out;
}

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

std::optional<double> median_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return median(v);
}

// Metric over a subset of ground-truth matches.
std::optional<double> object_metric(const EvalPair& pair, const std::vector<const Match*>& matches,
                                    BinnedMetric metric) {
  std::vector<double> values;
  for (const Match* m : matches) {
    const PerObject o = per_object(pair, *m);
    switch (metric) {
      case BinnedMetric::kPck10:
        if (o.has_keypoints) values.push_back(o.pck.value_or(0.0));
        break;
      case BinnedMetric::kMpjpe:
        if (o.mpjpe) values.push_back(*o.mpjpe);
        break;
      case BinnedMetric::kAccPi6:
      case BinnedMetric::kAccPi18: {
        if (!o.has_pose) break;
        const double thr = metric == BinnedMetric::kAccPi6 ? M_PI / 6.0 : M_PI / 18.0;
        values.push_back(o.rotation && *o.rotation < thr ? 1.0 : 0.0);
        break;
      }
      case BinnedMetric::kMedianRotation:
        if (o.rotation) values.push_back(*o.rotation);
        break;
      default:
        break;
    }
  }
  if (metric == BinnedMetric::kMedianRotation) return median_of(values);
  return mean_of(values);
}

}  // namespace

std::vector<BinRow> binned_curves(const EvalPair& pair, const OcclusionBins& bins, BinnedMetric metric) {
  bins.validate();
  const IouMode mode = metric == BinnedMetric::kApMask50 ? IouMode::kMask : IouMode::kBox;
  const Matching matching = match_predictions(pair, 0.5, mode);
  std::vector<BinRow> rows;
  for (std::size_t b = 0; b < bins.num_bins(); ++b) {
    BinRow row;
    row.lo = bins.edges[b];
    row.hi = bins.edges[b + 1];
    auto in_bin = [&](std::size_t image, std::size_t gt) {
      return bins.bin_of(pair.ground_truth[image].objects[gt].occlusion_fraction) == b;
    };
    std::vector<const Match*> members;
    for (const Match& m : matching.gt_matches) {
      if (in_bin(m.image, m.gt)) members.push_back(&m);
    }
    row.n = members.size();
    if (row.n > 0) {
      if (metric == BinnedMetric::kApBox50 || metric == BinnedMetric::kApMask50) {
        row.value = ap_from_matching(pair, matching, in_bin);
      } else {
        row.value = object_metric(pair, members, metric);
      }
    }
    rows.push_back(row);
  }
  return rows;
}

EvalReport evaluate(const EvalPair& pair) {
  EvalReport r;
  r.n_gt = count_objects(pair.ground_truth);
  r.n_pred = count_objects(pair.predictions);
  r.ap_box_50 = average_precision(pair, 0.5, IouMode::kBox);
  r.ap_box = average_precision_sweep(pair, IouMode::kBox);
  auto has_mask = [](const std::vector<EvalImage>& images) {
    for (const auto& im : images) {
      for (const auto& o : im.objects) {
        if (!o.mask) return false;
      }
    }
    return true;
  };
  if (has_mask(pair.predictions) && has_mask(pair.ground_truth)) {
    r.ap_mask_50 = average_precision(pair, 0.5, IouMode::kMask);
    r.ap_mask = average_precision_sweep(pair, IouMode::kMask);
  }
  const Matching matching = match_predictions(pair, 0.5, IouMode::kBox);
  std::vector<const Match*> all;
  for (const Match& m : matching.gt_matches) {
    all.push_back(&m);
    if (m.prediction) ++r.n_matched;
  }
  r.pck_10 = object_metric(pair, all, BinnedMetric::kPck10);
  r.mpjpe = object_metric(pair, all, BinnedMetric::kMpjpe);
  r.acc_pi6 = object_metric(pair, all, BinnedMetric::kAccPi6);
  r.acc_pi18 = object_metric(pair, all, BinnedMetric::kAccPi18);
  r.median_rotation = object_metric(pair, all, BinnedMetric::kMedianRotation);
  std::vector<double> translations;
  std::vector<double> adds;
  for (const Match* m : all) {
    const PerObject o = per_object(pair, *m);
    if (o.translation) translations.push_back(*o.translation);
    if (o.add) adds.push_back(*o.add);
  }
  r.median_translation = median_of(translations);
  r.median_add = median_of(adds);
  return r;
}

}  // namespace clipart
