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

#include "clipart/compositor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "clipart/error.hpp"
#include "clipart/random.hpp"

namespace clipart {

namespace {

Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

void project_interval(const std::array<Vec2, 4>& corners, const Vec2& axis, double* lo, double* hi) {
  *lo = std::numeric_limits<double>::infinity();
  *hi = -std::numeric_limits<double>::infinity();
  for (const Vec2& c : corners) {
    const double s = axis.dot(c);
    *lo = std::min(*lo, s);
    *hi = std::max(*hi, s);
  }
}

double footprint_depth(const CameraModel& camera, const OrientedRect& rect) {
  return camera.from_ground(rect.center).z();
}

}  // namespace

std::array<Vec2, 4> OrientedRect::corners() const {
  const Vec2 u = axis * half_u;
  const Vec2 v = perp(axis) * half_v;
  return {center - u - v, center + u - v, center + u + v, center - u + v};
}

OrientedRect min_area_rect(const std::vector<Vec2>& points) {
  if (points.empty()) fail(ErrorCode::kInvalidArgument, "no points for a footprint");
  const std::vector<Vec2> hull = convex_hull_2d(points);
  OrientedRect best;
  best.center = hull.front();
  if (hull.size() == 1) return best;
  double best_area = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < hull.size(); ++e) {
    const Vec2 edge = hull[(e + 1) % hull.size()] - hull[e];
    if (edge.norm() == 0.0) continue;
    const Vec2 u = edge.normalized();
    const Vec2 v = perp(u);
    double umin = std::numeric_limits<double>::infinity(), umax = -umin;
    double vmin = umin, vmax = -umin;
    for (const Vec2& p : hull) {
      umin = std::min(umin, u.dot(p));
      umax = std::max(umax, u.dot(p));
      vmin = std::min(vmin, v.dot(p));
      vmax = std::max(vmax, v.dot(p));
    }
    const double area = (umax - umin) * (vmax - vmin);
    if (area < best_area) {
      best_area = area;
      best.axis = u;
      best.half_u = 0.5 * (umax - umin);
      best.half_v = 0.5 * (vmax - vmin);
      best.center = 0.5 * (umin + umax) * u + 0.5 * (vmin + vmax) * v;
    }
  }
  return best;
}

bool rects_intersect(const OrientedRect& a, const OrientedRect& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  for (const Vec2& axis : {a.axis, perp(a.axis), b.axis, perp(b.axis)}) {
    double alo, ahi, blo, bhi;
    project_interval(ca, axis, &alo, &ahi);
    project_interval(cb, axis, &blo, &bhi);
    if (ahi <= blo || bhi <= alo) return false;
  }
  return true;
}

PointMatrix3 object_keypoints(const ReconstructedObject& object, const ShapeBasis& basis) {
  if (object.cls == ObjectClass::kCar) return instantiate(basis, object.coeffs);
  if (object.skeleton3d) return *object.skeleton3d;
  return PointMatrix3(0, 3);
}

std::vector<Vec3> hull_points(ObjectClass cls, const RigidPose& pose, const PointMatrix3& keypoints) {
  std::vector<Vec3> pts;
  if (cls == ObjectClass::kPerson && keypoints.rows() < 4) {
    const double hx = 0.5 * kPersonProxyWidth;
    const double hz = 0.5 * kPersonProxyDepth;
    for (double y : {0.0, kPersonProxyHeight}) {
      for (double x : {-hx, hx}) {
        for (double z : {-hz, hz}) pts.push_back(pose.apply(Vec3(x, y, z)));
      }
    }
    return pts;
  }
  for (Eigen::Index i = 0; i < keypoints.rows(); ++i) pts.push_back(pose.apply(keypoints.row(i).transpose()));
  return pts;
}

std::vector<Vec3> hull_points(const ReconstructedObject& object, const ShapeBasis& basis) {
  return hull_points(object.cls, object.pose, object_keypoints(object, basis));
}

OrientedRect compute_footprint(const CameraModel& camera, const std::vector<Vec3>& camera_points,
                               double margin) {
  std::vector<Vec2> ground;
  ground.reserve(camera_points.size());
  for (const Vec3& p : camera_points) ground.push_back(camera.to_ground(p));
  OrientedRect rect = min_area_rect(ground);
  rect.half_u += margin;
  rect.half_v += margin;
  return rect;
}

void SceneConfig::validate() const {
  if (min_objects < 1 || max_objects < min_objects) {
    fail(ErrorCode::kConfigError, "scene object range must satisfy 1 <= min_objects <= max_objects");
  }
  if (!(min_depth >= 0.0) || !(max_depth > min_depth)) {
    fail(ErrorCode::kConfigError, "scene depth range must satisfy 0 <= min_depth < max_depth");
  }
  if (feather_px < 0) fail(ErrorCode::kConfigError, "feather_px must be non-negative");
  if (!allow_car && !allow_person) fail(ErrorCode::kConfigError, "no object class allowed");
}

std::vector<ReconstructedObject> sample_nonintersecting(const std::vector<ReconstructedObject>& pool,
                                                        const CameraModel& camera,
                                                        const SceneConfig& config) {
  config.validate();
  if (pool.empty()) fail(ErrorCode::kEmptyPool, "object pool is empty");
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const ReconstructedObject& o = pool[i];
    if (o.cls == ObjectClass::kCar && !config.allow_car) continue;
    if (o.cls == ObjectClass::kPerson && !config.allow_person) continue;
    const double z = footprint_depth(camera, o.footprint);
    if (z < config.min_depth || z > config.max_depth) continue;
    candidates.push_back(i);
  }
  Rng rng(config.seed);
  rng.shuffle(candidates);
  const auto target = std::size_t(rng.uniform_int(config.min_objects, config.max_objects));

  std::vector<std::size_t> chosen;
  for (std::size_t i : candidates) {
    if (chosen.size() >= target) break;
    const bool clear = std::none_of(chosen.begin(), chosen.end(), [&](std::size_t j) {
      return rects_intersect(pool[i].footprint, pool[j].footprint);
    });
    if (clear) chosen.push_back(i);
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<ReconstructedObject> out;
  for (std::size_t i : chosen) out.push_back(pool[i]);
  return out;
}

std::vector<int> painter_order(const std::vector<OrientedRect>& footprints,
                               const std::vector<double>& depths, const std::vector<Box>& boxes) {
  const std::size_t n = footprints.size();
  if (depths.size() != n || boxes.size() != n) {
    fail(ErrorCode::kLengthMismatch, "painter order inputs differ in length");
  }
  // behind[i] lists objects that must be painted before i.
  std::vector<std::vector<int>> front_of(n);
  std::vector<int> pending(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (intersection_area(boxes[i], boxes[j]) <= 0.0) continue;
      const auto ci = footprints[i].corners();
      const auto cj = footprints[j].corners();
      for (const Vec2& axis : {footprints[i].axis, perp(footprints[i].axis), footprints[j].axis,
                               perp(footprints[j].axis)}) {
        double ilo, ihi, jlo, jhi;
        project_interval(ci, axis, &ilo, &ihi);
        project_interval(cj, axis, &jlo, &jhi);
        int front = -1;
        int back = -1;
        // The camera foot projects to 0 on every axis.
        if (ihi <= jlo) {
          if (0.0 <= ihi) front = int(i), back = int(j);
          else if (0.0 >= jlo) front = int(j), back = int(i);
        } else if (jhi <= ilo) {
          if (0.0 <= jhi) front = int(j), back = int(i);
          else if (0.0 >= ilo) front = int(i), back = int(j);
        } else {
          continue;  // not a separating axis
        }
        if (front >= 0) {
          front_of[std::size_t(back)].push_back(front);
          ++pending[std::size_t(front)];
        }
        break;
      }
    }
  }

  auto farther = [&](int a, int b) {
    if (depths[std::size_t(a)] != depths[std::size_t(b)]) return depths[std::size_t(a)] > depths[std::size_t(b)];
    return a < b;
  };
  std::vector<int> order;
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    int pick = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || pending[i] != 0) continue;
      if (pick < 0 || farther(int(i), pick)) pick = int(i);
    }
    if (pick < 0) {
      // Cyclic constraints: fall back to depth order among the rest.
      for (std::size_t i = 0; i < n; ++i) {
        if (!done[i] && (pick < 0 || farther(int(i), pick))) pick = int(i);
      }
    }
    done[std::size_t(pick)] = true;
    order.push_back(pick);
    for (int f : front_of[std::size_t(pick)]) --pending[std::size_t(f)];
  }
  return order;
}

DepthPatch rasterize_hull_depth(const CameraModel& camera, const ReconstructedObject& object,
                                const ShapeBasis& basis) {
  const std::vector<Vec3> pts = hull_points(object, basis);
  const DepthPatch hull = rasterize_hull(camera, pts);
  double centroid = 0.0;
  for (const Vec3& p : pts) centroid += p.z();
  centroid /= double(pts.size());

  const ImagePatch& crop = object.source_crop;
  DepthPatch out;
  out.x0 = crop.x0;
  out.y0 = crop.y0;
  out.width = crop.width();
  out.height = crop.height();
  out.billboard = hull.billboard;
  out.depth.assign(std::size_t(out.width) * std::size_t(out.height), std::numeric_limits<double>::infinity());
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      if (!crop.mask.at(x, y)) continue;
      const double z = hull.at(crop.x0 + x, crop.y0 + y);
      out.depth[std::size_t(y) * std::size_t(out.width) + std::size_t(x)] = std::isfinite(z) ? z : centroid;
    }
  }
  return out;
}

double occlusion_fraction(const Mask& modal, const Mask& amodal) {
  const std::size_t total = amodal.count();
  if (total == 0) fail(ErrorCode::kEmptyAmodal, "amodal mask is empty");
  if (!modal.is_subset_of(amodal)) fail(ErrorCode::kModalNotSubset, "modal mask leaves the amodal mask");
  return 1.0 - double(modal.count()) / double(total);
}

namespace {

// Per-pixel blend weight in (0, 1]: 1 inside the mask eroded by `feather`,
// ramping linearly toward the mask edge.
std::vector<double> feather_weights(const Mask& mask, int feather) {
  std::vector<double> w(mask.data().size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = mask.data()[i] ? 1.0 : 0.0;
  if (feather <= 0) return w;
  std::vector<int> level(w.size(), 0);
  Mask current = mask;
  for (int r = 1; r <= feather; ++r) {
    current = erode(current, 1);
    for (std::size_t i = 0; i < w.size(); ++i) level[i] += current.data()[i] ? 1 : 0;
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (mask.data()[i]) w[i] = double(level[i] + 1) / double(feather + 1);
  }
  return w;
}

}  // namespace

ClipArtRecord composite(const Image& background, const std::vector<ReconstructedObject>& objects,
                        const CameraModel& camera, const ShapeBasis& basis, const SceneConfig& config) {
  config.validate();
  const int width = camera.width();
  const int height = camera.height();
  if (background.width() != width || background.height() != height) {
    fail(ErrorCode::kSizeMismatch, "background size differs from the camera image size");
  }
  const std::size_t n = objects.size();
  for (std::size_t i = 0; i < n && config.require_disjoint; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rects_intersect(objects[i].footprint, objects[j].footprint)) {
        fail(ErrorCode::kOverlappingFootprints, "objects " + std::to_string(objects[i].object_id) + " and " +
                                                    std::to_string(objects[j].object_id) +
                                                    " have intersecting footprints");
      }
    }
  }

  ClipArtRecord record;
  record.rng_seed = config.seed;
  record.image = background;
  record.depth_map = DepthMap(width, height);
  record.objects.resize(n);

  std::vector<Mask> amodal(n);
  std::vector<DepthPatch> depth(n);
  std::vector<double> order_depth(n);
  std::vector<OrientedRect> footprints(n);
  std::vector<Box> boxes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ReconstructedObject& o = objects[i];
    amodal[i] = place_patch_mask(o.source_crop, width, height);
    if (amodal[i].count() == 0) {
      fail(ErrorCode::kEmptyAmodal, "object " + std::to_string(o.object_id) + " has an empty source mask");
    }
    depth[i] = rasterize_hull_depth(camera, o, basis);
    footprints[i] = o.footprint;
    order_depth[i] = footprint_depth(camera, o.footprint);
    boxes[i] = amodal[i].bbox();
  }
  record.paint_order = painter_order(footprints, order_depth, boxes);

  std::vector<int> rank(n);
  for (std::size_t k = 0; k < n; ++k) rank[std::size_t(record.paint_order[k])] = int(k);

  for (int idx : record.paint_order) {
    const ReconstructedObject& o = objects[std::size_t(idx)];
    const ImagePatch& crop = o.source_crop;
    const std::vector<double> alpha = feather_weights(crop.mask, config.feather_px);
    for (int y = 0; y < crop.height(); ++y) {
      for (int x = 0; x < crop.width(); ++x) {
        const double a = alpha[std::size_t(y) * std::size_t(crop.width()) + std::size_t(x)];
        if (a <= 0.0) continue;
        std::uint8_t* dst = record.image.pixel(crop.x0 + x, crop.y0 + y);
        const std::uint8_t* src = crop.pixels.pixel(x, y);
        for (int c = 0; c < 3; ++c) {
          dst[c] = a >= 1.0 ? src[c] : std::uint8_t(std::lround(a * src[c] + (1.0 - a) * dst[c]));
        }
      }
    }
  }

  std::vector<Mask> modal(n);
  for (std::size_t i = 0; i < n; ++i) {
    Mask covered(width, height);
    for (std::size_t j = 0; j < n; ++j) {
      if (rank[j] > rank[i]) covered |= amodal[j];
    }
    modal[i] = amodal[i].minus(covered);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const ReconstructedObject& o = objects[i];
    const DepthPatch& dp = depth[i];
    CompositeObject& out = record.objects[i];
    out.object_id = o.object_id;
    out.cls = o.cls;
    out.track_id = o.track_id;
    out.gt_object_id = o.gt_object_id;
    out.pose = o.pose;
    out.coeffs = o.coeffs;
    out.amodal_mask = amodal[i];
    out.modal_mask = modal[i];
    out.amodal_bbox = amodal[i].bbox();
    out.modal_bbox = modal[i].bbox();
    out.occlusion_fraction = occlusion_fraction(modal[i], amodal[i]);

    double depth_sum = 0.0;
    std::size_t depth_n = 0;
    for (int y = 0; y < dp.height; ++y) {
      for (int x = 0; x < dp.width; ++x) {
        const double z = dp.depth[std::size_t(y) * std::size_t(dp.width) + std::size_t(x)];
        if (!std::isfinite(z)) continue;
        depth_sum += z;
        ++depth_n;
        if (modal[i].at(dp.x0 + x, dp.y0 + y)) record.depth_map.set(dp.x0 + x, dp.y0 + y, z);
      }
    }
    out.mean_depth = depth_n > 0 ? depth_sum / double(depth_n) : 0.0;

    const PointMatrix3 local = object_keypoints(o, basis);
    const Eigen::Index nk = local.rows();
    out.keypoints3d.resize(nk, 3);
    out.keypoints.points.resize(nk, 2);
    out.keypoints.visibility.assign(std::size_t(nk), Visibility::kMissing);
    out.keypoints.confidence.assign(std::size_t(nk), 1.0);
    const std::vector<Vec3> own_hull = hull_points(o, basis);
    const DepthPatch own = rasterize_hull(camera, own_hull);
    for (Eigen::Index k = 0; k < nk; ++k) {
      const Vec3 pc = o.pose.apply(local.row(k).transpose());
      out.keypoints3d.row(k) = pc.transpose();
      const bool source_missing = k < o.keypoints2d_source.size() &&
                                  o.keypoints2d_source.visibility[std::size_t(k)] == Visibility::kMissing;
      if (!(pc.z() > 1e-9)) {
        out.keypoints.points.row(k) << 0.0, 0.0;
        continue;
      }
      const Pixel px = project(camera, pc);
      out.keypoints.points.row(k) << px.u, px.v;
      if (source_missing) continue;
      const int u = int(std::floor(px.u));
      const int v = int(std::floor(px.v));
      if (u < 0 || v < 0 || u >= width || v >= height) continue;
      bool hidden = false;
      for (std::size_t j = 0; j < n && !hidden; ++j) {
        if (j != i && rank[j] > rank[i] && modal[j].at(u, v)) hidden = true;
      }
      Visibility vis = Visibility::kVisible;
      if (hidden) {
        vis = Visibility::kOccludedByOthers;
      } else if (own.at(u, v) < pc.z() - kSelfOcclusionMargin) {
        vis = Visibility::kSelfOccluded;
      }
      out.keypoints.visibility[std::size_t(k)] = vis;
    }
  }
  return record;
}

}  // namespace clipart
