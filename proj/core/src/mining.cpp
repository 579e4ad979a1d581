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

#include "clipart/mining.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "clipart/error.hpp"

namespace clipart {

Box bottom_strip(const Box& box, double strip_fraction) {
  Box strip = box;
  strip.y0 = box.y1 - strip_fraction * box.height();
  return strip;
}

double strip_overlap(const Box& strip, const Box& other, StripOverlapMode mode) {
  const double inter = intersection_area(strip, other);
  if (inter <= 0.0) return 0.0;
  if (mode == StripOverlapMode::kIntersectionOverStrip) return inter / strip.area();
  return inter / (strip.area() + other.area() - inter);
}

bool touches_border(const Box& box, int width, int height, double margin) {
  return box.x0 < margin || box.y0 < margin || box.x1 > width - margin || box.y1 > height - margin;
}

std::vector<OcclusionLabel> heuristic_unoccluded(const std::vector<Detection>& frame, int width,
                                                 int height, const HeuristicOptions& options) {
  if (!(options.delta >= 0.0 && options.delta <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "delta must lie in [0, 1]");
  }
  std::vector<OcclusionLabel> labels(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    labels[i].source = LabelSource::kHeuristic;
    const Box& box = frame[i].bbox;
    bool clear = !box.empty() && !touches_border(box, width, height, options.border_margin_px);
    const Box strip = bottom_strip(box, options.strip_fraction);
    for (std::size_t j = 0; j < frame.size() && clear; ++j) {
      if (j == i) continue;
      if (!(strip_overlap(strip, frame[j].bbox, options.mode) < options.delta)) clear = false;
    }
    labels[i].status = clear ? OcclusionStatus::kUnoccluded : OcclusionStatus::kOccluded;
  }
  return labels;
}

std::vector<OcclusionLabel> OcclusionClassifier::classify(const std::vector<Detection>& frame, int width,
                                                          int height) const {
  std::vector<OcclusionLabel> labels;
  labels.reserve(frame.size());
  for (const Detection& det : frame) {
    const bool unoccluded = score(det, frame, width, height) >= threshold();
    labels.push_back({unoccluded ? OcclusionStatus::kUnoccluded : OcclusionStatus::kOccluded, source()});
  }
  return labels;
}

double HeuristicClassifier::score(const Detection& detection, const std::vector<Detection>& frame,
                                  int width, int height) const {
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (&frame[i] != &detection) continue;
    const auto labels = heuristic_unoccluded(frame, width, height, options_);
    return labels[i].status == OcclusionStatus::kUnoccluded ? 1.0 : 0.0;
  }
  // Not part of the frame: score against the whole frame.
  std::vector<Detection> with = frame;
  with.push_back(detection);
  const auto labels = heuristic_unoccluded(with, width, height, options_);
  return labels.back().status == OcclusionStatus::kUnoccluded ? 1.0 : 0.0;
}

double GroundTruthClassifier::score(const Detection& detection, const std::vector<Detection>&, int width,
                                    int height) const {
  if (!detection.gt_occlusion_fraction) {
    fail(ErrorCode::kInvalidArgument,
         "detection " + std::to_string(detection.detection_id) + " carries no ground-truth occlusion");
  }
  if (touches_border(detection.bbox, width, height, margin_)) return 0.0;
  return *detection.gt_occlusion_fraction == 0.0 ? 1.0 : 0.0;
}

namespace {

TrackFrame to_track_frame(const Detection& det) {
  TrackFrame tf;
  tf.frame_id = det.frame_id;
  tf.detection_id = det.detection_id;
  tf.bbox = det.bbox;
  tf.modal_mask = det.modal_mask;
  if (det.keypoints) tf.keypoints = *det.keypoints;
  tf.gt_object_id = det.gt_object_id;
  return tf;
}

}  // namespace

std::vector<ObjectTrack> track(const std::vector<std::vector<Detection>>& frames,
                               const TrackerOptions& options) {
  struct Active {
    std::size_t index;  // into `tracks`
    Box last_box;
    std::size_t last_seen;
  };
  std::vector<ObjectTrack> tracks;
  std::vector<Active> active;

  for (std::size_t f = 0; f < frames.size(); ++f) {
    const std::vector<Detection>& dets = frames[f];
    active.erase(std::remove_if(active.begin(), active.end(),
                                [&](const Active& a) {
                                  return f - a.last_seen > std::size_t(std::max(0, options.max_age)) + 1;
                                }),
                 active.end());

    // (iou, track id, detection index); sorted by iou desc, id asc, index asc.
    std::vector<std::tuple<double, std::int64_t, std::size_t, std::size_t>> candidates;
    for (std::size_t a = 0; a < active.size(); ++a) {
      const ObjectTrack& t = tracks[active[a].index];
      for (std::size_t d = 0; d < dets.size(); ++d) {
        if (dets[d].cls != t.cls) continue;
        const double iou = box_iou(active[a].last_box, dets[d].bbox);
        if (iou > options.iou_gate) candidates.emplace_back(iou, t.track_id, d, a);
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) {
      if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
      if (std::get<1>(x) != std::get<1>(y)) return std::get<1>(x) < std::get<1>(y);
      return std::get<2>(x) < std::get<2>(y);
    });
    std::vector<bool> det_used(dets.size(), false);
    std::vector<bool> track_used(active.size(), false);
    for (const auto& [iou, id, d, a] : candidates) {
      if (det_used[d] || track_used[a]) continue;
      det_used[d] = true;
      track_used[a] = true;
      tracks[active[a].index].frames.push_back(to_track_frame(dets[d]));
      active[a].last_box = dets[d].bbox;
      active[a].last_seen = f;
    }
    for (std::size_t d = 0; d < dets.size(); ++d) {
      if (det_used[d]) continue;
      ObjectTrack t;
      t.track_id = std::int64_t(tracks.size());
      t.cls = dets[d].cls;
      t.frames.push_back(to_track_frame(dets[d]));
      active.push_back({tracks.size(), dets[d].bbox, f});
      tracks.push_back(std::move(t));
    }
  }
  return tracks;
}

ClassifierReport evaluate_classifier(const std::vector<OcclusionLabel>& labels,
                                     const std::vector<OcclusionLabel>& truth) {
  if (labels.size() != truth.size()) {
    fail(ErrorCode::kLengthMismatch, "got " + std::to_string(labels.size()) + " labels for " +
                                         std::to_string(truth.size()) + " ground-truth entries");
  }
  ClassifierReport report;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool pred = labels[i].status == OcclusionStatus::kUnoccluded;
    const bool gt = truth[i].status == OcclusionStatus::kUnoccluded;
    if (pred && gt) ++report.true_positives;
    if (pred && !gt) ++report.false_positives;
    if (!pred && gt) ++report.false_negatives;
    if (!pred && !gt) ++report.true_negatives;
  }
  const auto predicted = report.true_positives + report.false_positives;
  const auto actual = report.true_positives + report.false_negatives;
  report.precision_defined = predicted > 0;
  report.recall_defined = actual > 0;
  report.precision = predicted > 0 ? double(report.true_positives) / double(predicted) : 0.0;
  report.recall = actual > 0 ? double(report.true_positives) / double(actual) : 0.0;
  return report;
}

MiningResult mine_unoccluded(const std::vector<std::vector<Detection>>& frames, int width, int height,
                             const OcclusionClassifier& classifier, const TrackerOptions& tracker) {
  MiningResult result;
  std::map<std::int64_t, bool> unoccluded;  // by detection id
  for (const auto& frame : frames) {
    result.labels.push_back(classifier.classify(frame, width, height));
    for (std::size_t i = 0; i < frame.size(); ++i) {
      const auto [it, inserted] = unoccluded.emplace(
          frame[i].detection_id, result.labels.back()[i].status == OcclusionStatus::kUnoccluded);
      if (!inserted) {
        fail(ErrorCode::kValidationError,
             "duplicate detection id " + std::to_string(frame[i].detection_id));
      }
      (void)it;
    }
  }
  for (ObjectTrack& t : track(frames, tracker)) {
    std::vector<TrackFrame> kept;
    for (TrackFrame& tf : t.frames) {
      if (unoccluded.at(tf.detection_id)) kept.push_back(std::move(tf));
    }
    if (kept.empty()) continue;
    t.frames = std::move(kept);
    result.tracks.push_back(std::move(t));
  }
  return result;
}

}  // namespace clipart
