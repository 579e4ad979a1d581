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

#include <random>

#include "../oracles/oracles.hpp"
#include "../oracles/zbuffer.hpp"
#include "clipart/compositor.hpp"
#include "clipart/error.hpp"
#include "clipart/raster.hpp"
#include "support.hpp"

using namespace clipart;
using testing_support::intrinsics;

namespace {

std::vector<Vec3> cube(const Vec3& c, double side) {
  std::vector<Vec3> pts;
  const double h = side / 2;
  for (double x : {-h, h})
    for (double y : {-h, h})
      for (double z : {-h, h}) pts.push_back(c + Vec3(x, y, z));
  return pts;
}

CameraModel plain_camera(int w = 200, int h = 200) {
  return CameraModel::create(intrinsics(200, w / 2.0, h / 2.0), Vec3(0, 1, 0), -2.0, w, h);
}

std::vector<Vec2> as_polygon(const OrientedRect& r) {
  const auto c = r.corners();
  return {c.begin(), c.end()};
}

Mask box_mask(int w, int h, int x0, int y0, int x1, int y1) {
  Mask m(w, h);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) m.set(x, y);
  return m;
}

}  // namespace

TEST(Raster, UnitCubeCenterDepth) {
  const CameraModel cam = plain_camera();
  const DepthPatch p = rasterize_hull(cam, cube(Vec3(0, 0, 10), 1.0));
  EXPECT_FALSE(p.billboard);
  EXPECT_NEAR(p.at(100, 100), 9.5, 1e-12);
  EXPECT_FALSE(std::isfinite(p.at(0, 0)));
  // Front face spans 200 * 0.5 / 9.5 pixels either side of the center.
  EXPECT_TRUE(p.covers(100 + 9, 100));
  EXPECT_FALSE(p.covers(100 + 12, 100));
}

TEST(Raster, MatchesRayCastingOracleOnRandomPolyhedra) {
  const CameraModel cam = plain_camera(160, 120);
  std::mt19937_64 gen(11);
  std::normal_distribution<double> n(0, 1);
  std::uniform_int_distribution<int> px(0, 159), py(0, 119);
  int checked = 0, covered = 0;
  for (int poly = 0; poly < 20; ++poly) {
    std::vector<Vec3> pts;
    const Vec3 c(n(gen) * 0.5, n(gen) * 0.5, 8 + 2 * std::abs(n(gen)));
    for (int k = 0; k < 10; ++k) pts.push_back(c + Vec3(n(gen), n(gen), n(gen)));
    const DepthPatch patch = rasterize_hull(cam, pts);
    for (int s = 0; s < 50; ++s, ++checked) {
      const int x = px(gen), y = py(gen);
      const double want = oracle::hull_entry_depth(pts, cam.intrinsics(), x + 0.5, y + 0.5);
      const double got = patch.at(x, y);
      ASSERT_EQ(std::isfinite(want), std::isfinite(got)) << x << "," << y;
      if (std::isfinite(want)) {
        ++covered;
        EXPECT_LT(std::abs(want - got), 1e-4);
      }
    }
  }
  EXPECT_EQ(checked, 1000);
  EXPECT_GT(covered, 100);
}

TEST(Raster, CoplanarPointsBecomeBillboard) {
  const CameraModel cam = plain_camera();
  std::vector<Vec3> pts = {{-1, -1, 10}, {1, -1, 10}, {1, 1, 10}, {-1, 1, 10}, {0, 0, 10}};
  const DepthPatch p = rasterize_hull(cam, pts);
  EXPECT_TRUE(p.billboard);
  EXPECT_DOUBLE_EQ(p.at(100, 100), 10.0);
  EXPECT_TRUE(convex_hull_triangles(pts).empty());
}

TEST(Raster, BehindCameraRejected) {
  try {
    rasterize_hull(plain_camera(), cube(Vec3(0, 0, 0.2), 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonPositiveDepth);
  }
}

TEST(Raster, HullTrianglesAreOutward) {
  const std::vector<Vec3> pts = cube(Vec3(1, 2, 3), 2.0);
  const auto tris = convex_hull_triangles(pts);
  // Each square face has 4 supporting triples, each covering half the face.
  EXPECT_EQ(tris.size(), 24u);
  double area = 0;
  for (const auto& t : tris) {
    const Vec3& a = pts[std::size_t(t[0])];
    const Vec3 nrm = (pts[std::size_t(t[1])] - a).cross(pts[std::size_t(t[2])] - a);
    for (const Vec3& p : pts) EXPECT_LE(nrm.dot(p - a), 1e-12);
    area += 0.5 * nrm.norm();
  }
  EXPECT_NEAR(area, 2 * 24.0, 1e-9);
}

TEST(Footprint, MinAreaRectContainsPointsAndBeatsAngleSweep) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vec2> pts;
    for (int k = 0; k < 12; ++k) pts.emplace_back(n(gen) * 3, n(gen));
    const OrientedRect r = min_area_rect(pts);
    const Vec2 v(-r.axis.y(), r.axis.x());
    for (const Vec2& p : pts) {
      EXPECT_LE(std::abs(r.axis.dot(p - r.center)), r.half_u + 1e-9);
      EXPECT_LE(std::abs(v.dot(p - r.center)), r.half_v + 1e-9);
    }
    for (int a = 0; a < 720; ++a) {
      const double th = a * M_PI / 720;
      const Vec2 u(std::cos(th), std::sin(th)), w(-u.y(), u.x());
      double ul = 1e300, uh = -1e300, wl = 1e300, wh = -1e300;
      for (const Vec2& p : pts) {
        ul = std::min(ul, u.dot(p)), uh = std::max(uh, u.dot(p));
        wl = std::min(wl, w.dot(p)), wh = std::max(wh, w.dot(p));
      }
      EXPECT_LE(r.area(), (uh - ul) * (wh - wl) + 1e-9);
    }
  }
}

TEST(Footprint, IntersectionAgreesWithPolygonClipping) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-3, 3), ang(0, M_PI), ext(0.2, 2);
  int hits = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    OrientedRect a, b;
    for (OrientedRect* r : {&a, &b}) {
      const double t = ang(gen);
      r->center = Vec2(u(gen), u(gen));
      r->axis = Vec2(std::cos(t), std::sin(t));
      r->half_u = ext(gen);
      r->half_v = ext(gen);
    }
    const double area = oracle::intersection_area(as_polygon(a), as_polygon(b));
    if (area < 1e-9 && area > 0) continue;  // grazing contact, either answer is fine
    EXPECT_EQ(rects_intersect(a, b), area > 0) << trial;
    hits += area > 0;
  }
  EXPECT_GT(hits, 100);
}

TEST(Footprint, SampledSubsetIsPairwiseDisjoint) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-10, 10), ang(0, M_PI), ext(0.5, 2.5);
  const CameraModel cam = testing_support::street_camera();
  std::vector<ReconstructedObject> pool(50);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const double t = ang(gen);
    pool[i].object_id = std::int64_t(i);
    pool[i].footprint.center = Vec2(u(gen), 20 + u(gen));
    pool[i].footprint.axis = Vec2(std::cos(t), std::sin(t));
    pool[i].footprint.half_u = ext(gen);
    pool[i].footprint.half_v = ext(gen);
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SceneConfig cfg;
    cfg.seed = seed;
    cfg.min_objects = 3;
    cfg.max_objects = 10;
    const auto chosen = sample_nonintersecting(pool, cam, cfg);
    ASSERT_GE(chosen.size(), 1u);
    ASSERT_LE(chosen.size(), 10u);
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      for (std::size_t j = i + 1; j < chosen.size(); ++j) {
        EXPECT_LT(oracle::intersection_area(as_polygon(chosen[i].footprint), as_polygon(chosen[j].footprint)), 1e-9);
      }
    }
    const auto again = sample_nonintersecting(pool, cam, cfg);
    ASSERT_EQ(again.size(), chosen.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) EXPECT_EQ(again[i].object_id, chosen[i].object_id);
  }
}

TEST(Footprint, FiltersClassAndDepth) {
  const CameraModel cam = testing_support::street_camera();
  std::vector<ReconstructedObject> pool(2);
  pool[0].cls = ObjectClass::kPerson;
  pool[0].footprint.center = Vec2(0, 10);
  pool[1].footprint.center = Vec2(0, 40);
  pool[0].footprint.half_u = pool[0].footprint.half_v = pool[1].footprint.half_u = pool[1].footprint.half_v = 0.5;
  SceneConfig cfg;
  cfg.max_objects = 2;
  cfg.min_objects = 2;
  cfg.allow_person = false;
  auto out = sample_nonintersecting(pool, cam, cfg);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].cls, ObjectClass::kCar);
  cfg.allow_person = true;
  cfg.max_depth = 20;
  out = sample_nonintersecting(pool, cam, cfg);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].cls, ObjectClass::kPerson);
  EXPECT_THROW(sample_nonintersecting({}, cam, SceneConfig{}), Error);
}

TEST(OcclusionFraction, Examples) {
  const Mask amodal = box_mask(10, 10, 0, 0, 4, 5);
  EXPECT_DOUBLE_EQ(occlusion_fraction(amodal, amodal), 0.0);
  EXPECT_DOUBLE_EQ(occlusion_fraction(Mask(10, 10), amodal), 1.0);
  EXPECT_DOUBLE_EQ(occlusion_fraction(box_mask(10, 10, 0, 0, 4, 1), amodal), 0.8);
  try {
    occlusion_fraction(Mask(10, 10), Mask(10, 10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyAmodal);
  }
  try {
    occlusion_fraction(box_mask(10, 10, 5, 5, 6, 6), amodal);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kModalNotSubset);
  }
}

class CompositeScenes : public ::testing::Test {
 protected:
  ShapeBasis basis = make_toy_basis(2);
};

TEST_F(CompositeScenes, PainterMatchesZBufferOracle) {
  int scenes = 0, occluded_objects = 0;
  for (std::uint64_t seed = 0; scenes < 20; ++seed) {
    const auto sp = testing_support::scene_pool(seed, basis);
    SceneConfig cfg;
    cfg.seed = seed;
    cfg.min_objects = 2;
    cfg.max_objects = 6;
    const auto objects = sample_nonintersecting(sp.pool, sp.scene.camera, cfg);
    if (objects.size() < 2) continue;
    ++scenes;
    const ClipArtRecord rec = composite(sp.scene.background, objects, sp.scene.camera, basis, cfg);
    const auto want = oracle::zbuffer_modal(objects, sp.scene.camera, basis);
    for (std::size_t i = 0; i < objects.size(); ++i) {
      const CompositeObject& o = rec.objects[i];
      EXPECT_TRUE(o.modal_mask == want[i]) << "seed " << seed << " object " << i;
      EXPECT_TRUE(o.modal_mask.is_subset_of(o.amodal_mask));
      EXPECT_EQ(o.occlusion_fraction,
                1.0 - double(o.modal_mask.count()) / double(o.amodal_mask.count()));
      occluded_objects += o.occlusion_fraction > 0;
    }
  }
  EXPECT_GT(occluded_objects, 0);
}

TEST_F(CompositeScenes, ModalMasksDisjointAndDeterministic) {
  for (std::uint64_t seed = 100; seed < 106; ++seed) {
    const auto sp = testing_support::scene_pool(seed, basis);
    SceneConfig cfg;
    cfg.seed = seed;
    cfg.feather_px = 2;
    const auto objects = sample_nonintersecting(sp.pool, sp.scene.camera, cfg);
    const ClipArtRecord a = composite(sp.scene.background, objects, sp.scene.camera, basis, cfg);
    const ClipArtRecord b = composite(sp.scene.background, objects, sp.scene.camera, basis, cfg);
    EXPECT_TRUE(a.image == b.image);
    EXPECT_TRUE(a.depth_map == b.depth_map);
    EXPECT_EQ(a.paint_order, b.paint_order);
    for (std::size_t i = 0; i < a.objects.size(); ++i) {
      EXPECT_TRUE(a.objects[i].modal_mask == b.objects[i].modal_mask);
      for (std::size_t j = i + 1; j < a.objects.size(); ++j) {
        EXPECT_EQ(a.objects[i].modal_mask.intersection_count(a.objects[j].modal_mask), 0u);
      }
    }
  }
}

TEST_F(CompositeScenes, AddingAnObjectNeverReducesOcclusion) {
  int checked = 0;
  for (std::uint64_t seed = 200; seed < 215; ++seed) {
    const auto sp = testing_support::scene_pool(seed, basis);
    SceneConfig cfg;
    cfg.seed = seed;
    cfg.min_objects = 2;
    cfg.max_objects = 6;
    auto objects = sample_nonintersecting(sp.pool, sp.scene.camera, cfg);
    if (objects.size() < 2) continue;
    // Drop the nearest object, then add it back.
    std::size_t nearest = 0;
    for (std::size_t i = 1; i < objects.size(); ++i) {
      if (objects[i].pose.translation().z() < objects[nearest].pose.translation().z()) nearest = i;
    }
    std::vector<ReconstructedObject> fewer;
    for (std::size_t i = 0; i < objects.size(); ++i) {
      if (i != nearest) fewer.push_back(objects[i]);
    }
    const ClipArtRecord with = composite(sp.scene.background, objects, sp.scene.camera, basis, cfg);
    const ClipArtRecord without = composite(sp.scene.background, fewer, sp.scene.camera, basis, cfg);
    for (const CompositeObject& o : without.objects) {
      for (const CompositeObject& p : with.objects) {
        if (p.object_id != o.object_id) continue;
        EXPECT_GE(p.occlusion_fraction, o.occlusion_fraction);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 10);
}

TEST_F(CompositeScenes, FullyHiddenObject) {
  // Level camera 1 m up: a far person projects entirely inside a near car.
  const CameraModel cam = testing_support::street_camera(1.0, 0.0);
  const Image bg(cam.width(), cam.height());
  ReconstructedObject car, person;
  car.object_id = 0;
  car.pose = testing_support::ground_pose(cam, Vec2(0, 8), M_PI / 2);
  car.coeffs = ShapeCoefficients::zeros(2);
  person.object_id = 1;
  person.cls = ObjectClass::kPerson;
  person.pose = testing_support::ground_pose(cam, Vec2(0, 20), 0);
  for (ReconstructedObject* o : {&car, &person}) {
    const DepthPatch p = rasterize_hull(cam, hull_points(*o, basis));
    o->source_crop = extract_patch(bg, p.coverage(cam.width(), cam.height()));
    o->footprint = compute_footprint(cam, hull_points(*o, basis));
  }
  const Mask car_mask = place_patch_mask(car.source_crop, cam.width(), cam.height());
  const Mask person_mask = place_patch_mask(person.source_crop, cam.width(), cam.height());
  ASSERT_TRUE(person_mask.is_subset_of(car_mask));
  const ClipArtRecord rec = composite(bg, {person, car}, cam, basis, SceneConfig{});
  EXPECT_EQ(rec.paint_order, (std::vector<int>{0, 1}));
  EXPECT_DOUBLE_EQ(rec.objects[0].occlusion_fraction, 1.0);
  EXPECT_EQ(rec.objects[0].modal_mask.count(), 0u);
  EXPECT_TRUE(rec.objects[0].modal_bbox.empty());
  EXPECT_DOUBLE_EQ(rec.objects[1].occlusion_fraction, 0.0);
}

TEST_F(CompositeScenes, RejectsOverlappingFootprintsAndSizeMismatch) {
  const auto sp = testing_support::scene_pool(1, basis);
  std::vector<ReconstructedObject> twice = {sp.pool[0], sp.pool[0]};
  twice[1].object_id = 99;
  try {
    composite(sp.scene.background, twice, sp.scene.camera, basis, SceneConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOverlappingFootprints);
  }
  try {
    composite(Image(3, 3), {sp.pool[0]}, sp.scene.camera, basis, SceneConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSizeMismatch);
  }
}

TEST_F(CompositeScenes, KeypointVisibilityFollowsModalMasks) {
  int hidden = 0;
  for (std::uint64_t seed = 300; seed < 320; ++seed) {
    const auto sp = testing_support::scene_pool(seed, basis);
    SceneConfig cfg;
    cfg.seed = seed;
    cfg.max_objects = 6;
    const auto objects = sample_nonintersecting(sp.pool, sp.scene.camera, cfg);
    const ClipArtRecord rec = composite(sp.scene.background, objects, sp.scene.camera, basis, cfg);
    for (std::size_t i = 0; i < rec.objects.size(); ++i) {
      const CompositeObject& o = rec.objects[i];
      for (std::size_t k = 0; k < o.keypoints.size(); ++k) {
        if (o.keypoints.visibility[k] != Visibility::kOccludedByOthers) continue;
        ++hidden;
        const int u = int(std::floor(o.keypoints.points(Eigen::Index(k), 0)));
        const int v = int(std::floor(o.keypoints.points(Eigen::Index(k), 1)));
        bool covered = false;
        for (std::size_t j = 0; j < rec.objects.size(); ++j) covered |= j != i && rec.objects[j].modal_mask.at(u, v);
        EXPECT_TRUE(covered);
      }
    }
  }
  EXPECT_GT(hidden, 0);
}
