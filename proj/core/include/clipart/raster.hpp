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

#include <array>
#include <vector>

#include "clipart/geometry.hpp"
#include "clipart/image.hpp"

namespace clipart {

// Depths over an image-aligned window; +inf marks uncovered pixels.
struct DepthPatch {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;
  std::vector<double> depth;
  bool billboard = false;

  bool covers(int x, int y) const;
  // +inf outside the window or where uncovered.
  double at(int x, int y) const;
  Mask coverage(int image_width, int image_height) const;
};

// Outward-oriented triangles spanned by every point triple whose plane
// supports the convex hull. Coplanar faces come out covered more than once,
// which nearest-depth queries do not mind. Empty when the points span no
// volume.
std::vector<std::array<int, 3>> convex_hull_triangles(const std::vector<Vec3>& points);

// Rasterizes the convex hull of camera-frame points: a pixel is covered when
// its center falls inside a projected hull triangle, and its depth is the
// nearest ray/triangle-plane intersection. Degenerate hulls become a
// constant-depth billboard of the projected outline at the centroid depth.
// The patch is clipped to the image. Throws kNonPositiveDepth.
DepthPatch rasterize_hull(const CameraModel& camera, const std::vector<Vec3>& points);

// 2D convex hull, counter-clockwise, without collinear points.
std::vector<Vec2> convex_hull_2d(std::vector<Vec2> points);

}  // namespace clipart
