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

#include "clipart/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clipart/error.hpp"

namespace clipart {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

struct Window {
  int x0, y0, x1, y1;  // pixel index range [x0, x1) x [y0, y1)
};

// Pixels whose centers may fall inside the given projected points.
Window pixel_window(const std::vector<Vec2>& pts, int width, int height) {
  double minx = kInf, miny = kInf, maxx = -kInf, maxy = -kInf;
  for (const Vec2& p : pts) {
    minx = std::min(minx, p.x());
    miny = std::min(miny, p.y());
    maxx = std::max(maxx, p.x());
    maxy = std::max(maxy, p.y());
  }
  Window w;
  w.x0 = int(std::clamp(std::ceil(minx - 0.5), 0.0, double(width)));
  w.y0 = int(std::clamp(std::ceil(miny - 0.5), 0.0, double(height)));
  w.x1 = int(std::clamp(std::floor(maxx - 0.5) + 1.0, 0.0, double(width)));
  w.y1 = int(std::clamp(std::floor(maxy - 0.5) + 1.0, 0.0, double(height)));
  if (w.x1 < w.x0) w.x1 = w.x0;
  if (w.y1 < w.y0) w.y1 = w.y0;
  return w;
}

DepthPatch empty_patch(const Window& w) {
  DepthPatch patch;
  patch.x0 = w.x0;
  patch.y0 = w.y0;
  patch.width = w.x1 - w.x0;
  patch.height = w.y1 - w.y0;
  patch.depth.assign(std::size_t(patch.width) * std::size_t(patch.height), kInf);
  return patch;
}

}  // namespace

bool DepthPatch::covers(int x, int y) const { return std::isfinite(at(x, y)); }

double DepthPatch::at(int x, int y) const {
  if (x < x0 || y < y0 || x >= x0 + width || y >= y0 + height) return kInf;
  return depth[std::size_t(y - y0) * std::size_t(width) + std::size_t(x - x0)];
}

Mask DepthPatch::coverage(int image_width, int image_height) const {
  Mask m(image_width, image_height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int gx = x0 + x;
      const int gy = y0 + y;
      if (m.contains(gx, gy) && std::isfinite(depth[std::size_t(y) * std::size_t(width) + std::size_t(x)])) {
        m.set(gx, gy);
      }
    }
  }
  return m;
}

std::vector<std::array<int, 3>> convex_hull_triangles(const std::vector<Vec3>& points) {
  const int n = int(points.size());
  std::vector<std::array<int, 3>> faces;
  if (n < 4) return faces;
  double scale = 0.0;
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : points) centroid += p;
  centroid /= double(n);
  for (const Vec3& p : points) scale = std::max(scale, (p - centroid).norm());
  if (!(scale > 0.0)) return faces;
  const double eps = 1e-9 * scale;

  bool volume = false;
  for (int i = 0; i < n && !volume; ++i) {
    for (int j = i + 1; j < n && !volume; ++j) {
      for (int k = j + 1; k < n && !volume; ++k) {
        const Vec3 normal = (points[std::size_t(j)] - points[std::size_t(i)])
                                .cross(points[std::size_t(k)] - points[std::size_t(i)]);
        if (normal.norm() <= eps * scale) continue;
        const Vec3 u = normal.normalized();
        for (int m = 0; m < n; ++m) {
          if (std::abs(u.dot(points[std::size_t(m)] - points[std::size_t(i)])) > eps) {
            volume = true;
            break;
          }
        }
      }
    }
  }
  if (!volume) return faces;

  // Brute force: a triple is a hull face when every point lies on one side.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const Vec3& a = points[std::size_t(i)];
        Vec3 normal = (points[std::size_t(j)] - a).cross(points[std::size_t(k)] - a);
        const double len = normal.norm();
        if (len <= eps * scale) continue;
        normal /= len;
        bool above = false;
        bool below = false;
        for (int m = 0; m < n; ++m) {
          const double s = normal.dot(points[std::size_t(m)] - a);
          if (s > eps) above = true;
          if (s < -eps) below = true;
        }
        if (above && below) continue;
        if (above) {
          faces.push_back({i, k, j});
        } else {
          faces.push_back({i, j, k});
        }
      }
    }
  }
  return faces;
}

std::vector<Vec2> convex_hull_2d(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;
  std::vector<Vec2> hull(2 * points.size());
  std::size_t k = 0;
  for (const Vec2& p : points) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = points.size() - 1; i-- > 0;) {
    while (k >= lower && cross2(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

DepthPatch rasterize_hull(const CameraModel& camera, const std::vector<Vec3>& points) {
  if (points.empty()) fail(ErrorCode::kInvalidArgument, "no points to rasterize");
  std::vector<Vec2> projected;
  projected.reserve(points.size());
  for (const Vec3& p : points) {
    const Pixel px = project(camera, p);
    projected.emplace_back(px.u, px.v);
  }
  const Window window = pixel_window(projected, camera.width(), camera.height());
  DepthPatch patch = empty_patch(window);
  const Mat3& Kinv = camera.intrinsics_inverse();

  const auto faces = convex_hull_triangles(points);
  if (faces.empty()) {
    patch.billboard = true;
    Vec3 centroid = Vec3::Zero();
    for (const Vec3& p : points) centroid += p;
    const double z = centroid.z() / double(points.size());
    const std::vector<Vec2> outline = convex_hull_2d(projected);
    if (outline.size() < 3) return patch;
    for (int y = window.y0; y < window.y1; ++y) {
      for (int x = window.x0; x < window.x1; ++x) {
        const Vec2 c(x + 0.5, y + 0.5);
        bool inside = true;
        for (std::size_t e = 0; e < outline.size() && inside; ++e) {
          if (cross2(outline[e], outline[(e + 1) % outline.size()], c) < 0.0) inside = false;
        }
        if (inside) patch.depth[std::size_t(y - window.y0) * std::size_t(patch.width) + std::size_t(x - window.x0)] = z;
      }
    }
    return patch;
  }

  for (const auto& face : faces) {
    const Vec2& a = projected[std::size_t(face[0])];
    const Vec2& b = projected[std::size_t(face[1])];
    const Vec2& c = projected[std::size_t(face[2])];
    const double area = cross2(a, b, c);
    if (area == 0.0) continue;  // seen edge-on
    const Vec3& pa = points[std::size_t(face[0])];
    const Vec3 normal = (points[std::size_t(face[1])] - pa).cross(points[std::size_t(face[2])] - pa);
    const double offset = normal.dot(pa);
    const Window tw = pixel_window({a, b, c}, camera.width(), camera.height());
    for (int y = tw.y0; y < tw.y1; ++y) {
      for (int x = tw.x0; x < tw.x1; ++x) {
        const Vec2 p(x + 0.5, y + 0.5);
        double w0 = cross2(b, c, p);
        double w1 = cross2(c, a, p);
        double w2 = cross2(a, b, p);
        if (area < 0.0) {
          w0 = -w0;
          w1 = -w1;
          w2 = -w2;
        }
        if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
        const Vec3 ray = Kinv * Vec3(p.x(), p.y(), 1.0);
        const double denom = normal.dot(ray);
        if (denom == 0.0) continue;
        const double z = (offset / denom) * ray.z();
        if (!(z > 0.0)) continue;
        double& slot = patch.depth[std::size_t(y - window.y0) * std::size_t(patch.width) + std::size_t(x - window.x0)];
        slot = std::min(slot, z);
      }
    }
  }
  return patch;
}

}  // namespace clipart
