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
#include <memory>
#include <optional>
#include <vector>

#include "clipart/image.hpp"
#include "clipart/pose_fit.hpp"
#include "clipart/rle.hpp"
#include "clipart/types.hpp"

namespace clipart {

struct Detection {
  std::int64_t detection_id = -1;
  std::int64_t frame_id = 0;
  ObjectClass cls = ObjectClass::kCar;
  double score = 1.0;
  Box bbox;
  // Full-image modal mask.
  RleMask modal_mask;
  std::optional<Keypoints2D> keypoints;
  // Present only on synthetic streams.
  std::optional<std::int64_t> gt_object_id;
  std::optional<double> gt_occlusion_fraction;
};

enum class OcclusionStatus { kUnoccluded, kOccluded };
enum class LabelSource { kHeuristic, kClassifier, kGroundTruth };

struct OcclusionLabel {
  OcclusionStatus status = OcclusionStatus::kOccluded;
  LabelSource source = LabelSource::kHeuristic;
};

// How the bottom strip is compared against other boxes.
enum class StripOverlapMode {
  kIoU,                    // |strip ∩ box| / |strip ∪ box|
  kIntersectionOverStrip,  // |strip ∩ box| / |strip|
};

struct HeuristicOptions {
  double delta = 0.1;
  double strip_fraction = 0.25;
  double border_margin_px = 2.0;
  StripOverlapMode mode = StripOverlapMode::kIoU;
};

// Lowest strip_fraction of the box height.
Box bottom_strip(const Box& box, double strip_fraction);
double strip_overlap(const Box& strip, const Box& other, StripOverlapMode mode);
// True when the box comes within `margin` pixels of the image border.
bool touches_border(const Box& box, int width, int height, double margin);

// Unoccluded iff the bottom strip overlaps every other box by less than
// delta and the box keeps clear of the image border.
std::vector<OcclusionLabel> heuristic_unoccluded(const std::vector<Detection>& frame, int width,
                                                 int height, const HeuristicOptions& options);

// Scores a detection in [0, 1]; scores >= threshold() mean unoccluded.
class OcclusionClassifier {
 public:
  virtual ~OcclusionClassifier() = default;
  virtual double score(const Detection& detection, const std::vector<Detection>& frame, int width,
                       int height) const = 0;
  virtual LabelSource source() const = 0;
  double threshold() const { return 0.5; }

  std::vector<OcclusionLabel> classify(const std::vector<Detection>& frame, int width, int height) const;
};

class HeuristicClassifier final : public OcclusionClassifier {
 public:
  explicit HeuristicClassifier(HeuristicOptions options) : options_(options) {}
  double score(const Detection& detection, const std::vector<Detection>& frame, int width,
               int height) const override;
  LabelSource source() const override { return LabelSource::kHeuristic; }

 private:
  HeuristicOptions options_;
};

// Reads the geometric occlusion fraction carried by synthetic detections;
// unoccluded means fraction 0 and clear of the border. Throws
// kInvalidArgument for detections without it.
class GroundTruthClassifier final : public OcclusionClassifier {
 public:
  explicit GroundTruthClassifier(double border_margin_px = 2.0) : margin_(border_margin_px) {}
  double score(const Detection& detection, const std::vector<Detection>& frame, int width,
               int height) const override;
  LabelSource source() const override { return LabelSource::kGroundTruth; }

 private:
  double margin_;
};

struct TrackerOptions {
  double iou_gate = 0.3;
  // A track closes after this many consecutive frames without a match.
  int max_age = 3;
};

// Greedy IoU association over frames in sequence order. Track ids count up
// from 0 in creation order. Detections without keypoints get empty ones.
std::vector<ObjectTrack> track(const std::vector<std::vector<Detection>>& frames,
                               const TrackerOptions& options);

struct ClassifierReport {
  double recall = 0.0;
  double precision = 0.0;
  bool recall_defined = true;
  bool precision_defined = true;
  std::int64_t true_positives = 0;
  std::int64_t false_positives = 0;
  std::int64_t false_negatives = 0;
  std::int64_t true_negatives = 0;
};

// Unoccluded is the positive class. Undefined ratios are reported as 0 with
// the corresponding flag cleared. Throws kLengthMismatch.
ClassifierReport evaluate_classifier(const std::vector<OcclusionLabel>& labels,
                                     const std::vector<OcclusionLabel>& truth);

struct MiningResult {
  // Tracks restricted to unoccluded frames; tracks left empty are dropped.
  std::vector<ObjectTrack> tracks;
  // One label per input detection, in input order.
  std::vector<std::vector<OcclusionLabel>> labels;
};

MiningResult mine_unoccluded(const std::vector<std::vector<Detection>>& frames, int width, int height,
                             const OcclusionClassifier& classifier, const TrackerOptions& tracker);

}  // namespace clipart
