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

#include <gtest/gtest.h>

#include <cmath>

#include "clipart/error.hpp"
#include "clipart/rle.hpp"
#include "clipart/synth.hpp"

using namespace clipart;

namespace {

const ShapeBasis& basis() {
  static const ShapeBasis b = make_toy_basis(2);
  return b;
}

}  // namespace

TEST(Synth, DeterministicPerSeed) {
  SynthSpec spec;
  spec.n_frames = 2;
  const SyntheticScene a = generate_scene(9, spec, basis());
  const SyntheticScene b = generate_scene(9, spec, basis());
  EXPECT_EQ(serialize_ground_truth(a.truth), serialize_ground_truth(b.truth));
  ASSERT_EQ(a.frames.size(), 2u);
  EXPECT_TRUE(a.frames[1] == b.frames[1]);
  EXPECT_TRUE(a.background == b.background);
  const SyntheticScene c = generate_scene(10, spec, basis());
  EXPECT_NE(serialize_ground_truth(a.truth), serialize_ground_truth(c.truth));
}

TEST(Synth, RangesAndContactPlane) {
  SynthSpec spec;
  spec.n_frames = 2;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SyntheticScene s = generate_scene(seed, spec, basis());
    const CameraModel& cam = s.camera;
    const double height = -cam.plane_offset();
    EXPECT_GE(height, 3.0 - 1e-9);
    EXPECT_LE(height, 10.0 + 1e-9);
    // Pitch: angle between the optical axis and the ground plane.
    const double pitch = std::asin(cam.plane_normal().z()) * 180.0 / M_PI;
    EXPECT_GE(pitch, 10.0 - 1e-6);
    EXPECT_LE(pitch, 45.0 + 1e-6);
    for (const auto& f : s.truth.frames) {
      EXPECT_GE(int(f.objects.size()), spec.min_objects);
      for (const auto& o : f.objects) {
        EXPECT_GE(o.pose.translation().z(), 5.0);
        EXPECT_LE(o.pose.translation().z(), 60.0);
        // Object origin is its ground contact point.
        worst = std::max(worst, std::abs(cam.plane_residual(o.pose.translation())));
        if (o.cls == ObjectClass::kCar) {
          // Contact keypoints: those with object-frame height 0.
          const PointMatrix3 local = instantiate(basis(), o.coeffs);
          for (Eigen::Index k = 0; k < local.rows(); ++k) {
            if (std::abs(local(k, 1)) > 1e-12) continue;
            worst = std::max(worst, std::abs(cam.plane_residual(o.keypoints3d.row(k).transpose())));
          }
        }
      }
    }
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Synth, SingleObjectIsUnoccluded) {
  SynthSpec spec;
  spec.min_objects = spec.max_objects = 1;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SyntheticScene s = generate_scene(seed, spec, basis());
    for (const auto& f : s.truth.frames) {
      ASSERT_EQ(f.objects.size(), 1u);
      EXPECT_EQ(f.objects[0].occlusion_fraction, 0.0);
      EXPECT_EQ(f.objects[0].amodal_mask, f.objects[0].modal_mask);
      for (Visibility v : f.objects[0].keypoints.visibility) EXPECT_NE(v, Visibility::kOccludedByOthers);
    }
  }
}

TEST(Synth, MasksConsistent) {
  SynthSpec spec;
  spec.min_objects = 3;
  spec.max_objects = 5;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SyntheticScene s = generate_scene(seed, spec, basis());
    for (const auto& f : s.truth.frames) {
      std::vector<Mask> modal;
      for (const auto& o : f.objects) {
        const Mask a = rle_decode(o.amodal_mask), m = rle_decode(o.modal_mask);
        EXPECT_TRUE(m.is_subset_of(a));
        EXPECT_EQ(o.occlusion_fraction, 1.0 - double(m.count()) / double(a.count()));
        for (const Mask& other : modal) EXPECT_EQ(other.intersection_count(m), 0u);
        modal.push_back(m);
      }
    }
  }
}

TEST(Synth, InfeasibleSpecFails) {
  SynthSpec spec;
  spec.min_objects = spec.max_objects = 300;
  spec.max_attempts = 20;
  try {
    generate_scene(1, spec, basis());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasiblePlacement);
  }
  spec = SynthSpec{};
  spec.min_depth = 10;
  spec.max_depth = 5;
  EXPECT_THROW(generate_scene(1, spec, basis()), Error);
}

TEST(Corrupt, ZeroNoiseEqualsTruth) {
  SynthSpec spec;
  spec.n_frames = 3;
  const SyntheticScene s = generate_scene(4, spec, basis());
  const DetectionStream d = corrupt(s, {}, 1);
  ASSERT_EQ(d.frames.size(), 3u);
  for (std::size_t f = 0; f < 3; ++f) {
    for (const Detection& det : d.frames[f]) {
      const GroundTruthObjectState* g = s.truth.find(std::int64_t(f), *det.gt_object_id);
      ASSERT_NE(g, nullptr);
      EXPECT_EQ(det.modal_mask, g->modal_mask);
      EXPECT_EQ(det.bbox, rle_decode(g->modal_mask).bbox());
      EXPECT_EQ(*det.gt_occlusion_fraction, g->occlusion_fraction);
      if (det.cls == ObjectClass::kCar) {
        ASSERT_TRUE(det.keypoints.has_value());
        EXPECT_EQ(det.keypoints->points, g->keypoints.points);
        EXPECT_EQ(det.keypoints->visibility, g->keypoints.visibility);
      }
    }
  }
}

TEST(Corrupt, NoiseStatisticsAndDropout) {
  SynthSpec spec;
  spec.person_probability = 0.0;
  std::vector<double> residuals;
  for (std::uint64_t seed = 0; residuals.size() < 10000; ++seed) {
    const SyntheticScene s = generate_scene(seed, spec, basis());
    const DetectionStream d = corrupt(s, NoiseSpec{1.0, 0, 0.0}, seed);
    for (std::size_t f = 0; f < d.frames.size(); ++f) {
      for (const Detection& det : d.frames[f]) {
        const GroundTruthObjectState* g = s.truth.find(d.frame_ids[f], *det.gt_object_id);
        if (!det.keypoints) continue;
        for (int k = 0; k < det.keypoints->size(); ++k) {
          if (det.keypoints->visibility[std::size_t(k)] == Visibility::kMissing) continue;
          residuals.push_back(det.keypoints->points(k, 0) - g->keypoints.points(k, 0));
          residuals.push_back(det.keypoints->points(k, 1) - g->keypoints.points(k, 1));
        }
      }
    }
  }
  double mean = 0, var = 0;
  for (double r : residuals) mean += r;
  mean /= double(residuals.size());
  for (double r : residuals) var += (r - mean) * (r - mean);
  const double sd = std::sqrt(var / double(residuals.size() - 1));
  EXPECT_NEAR(sd, 1.0, 0.05);

  const SyntheticScene s = generate_scene(3, spec, basis());
  const DetectionStream all_gone = corrupt(s, NoiseSpec{0.0, 0, 1.0}, 3);
  for (const auto& f : all_gone.frames)
    for (const Detection& det : f)
      for (Visibility v : det.keypoints->visibility) EXPECT_EQ(v, Visibility::kMissing);
  EXPECT_THROW(corrupt(s, NoiseSpec{-1.0, 0, 0.0}, 3), Error);
  EXPECT_THROW(corrupt(s, NoiseSpec{0.0, 0, 1.5}, 3), Error);
}

TEST(Corrupt, MaskJitterStaysNearTruth) {
  SynthSpec spec;
  const SyntheticScene s = generate_scene(5, spec, basis());
  const DetectionStream d = corrupt(s, NoiseSpec{0.0, 2, 0.0}, 5);
  for (std::size_t f = 0; f < d.frames.size(); ++f) {
    for (const Detection& det : d.frames[f]) {
      const Mask truth = rle_decode(s.truth.find(d.frame_ids[f], *det.gt_object_id)->modal_mask);
      const Mask got = rle_decode(det.modal_mask);
      EXPECT_TRUE(got.is_subset_of(dilate(truth, 2)));
      EXPECT_TRUE(erode(truth, 2).is_subset_of(got));
    }
  }
}

TEST(GroundTruthIo, RoundTrip) {
  SynthSpec spec;
  spec.n_frames = 2;
  const SyntheticScene s = generate_scene(12, spec, basis());
  const std::string t = serialize_ground_truth(s.truth);
  const SequenceGroundTruth back = parse_ground_truth(t, "mem");
  EXPECT_EQ(serialize_ground_truth(back), t);
  ASSERT_TRUE(back.camera.has_value());
  EXPECT_EQ(back.frames.size(), 2u);
  // The ground-truth tag is distinct from the annotation tag.
  EXPECT_THROW(parse_annotations(t, "mem"), Error);
}
