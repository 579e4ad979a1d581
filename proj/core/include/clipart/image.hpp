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
#include <limits>
#include <vector>

namespace clipart {

// Axis-aligned box in continuous pixel coordinates, [x0, x1) x [y0, y1).
struct Box {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 > x0 ? x1 - x0 : 0.0; }
  double height() const { return y1 > y0 ? y1 - y0 : 0.0; }
  double area() const { return width() * height(); }
  bool empty() const { return !(x1 > x0 && y1 > y0); }

  friend bool operator==(const Box&, const Box&) = default;
};

double intersection_area(const Box& a, const Box& b);
double box_iou(const Box& a, const Box& b);

// Binary mask, row-major, one byte per pixel (0 or 1).
class Mask {
 public:
  Mask() = default;
  Mask(int width, int height) : width_(width), height_(height), data_(std::size_t(width) * height, 0) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty_size() const { return data_.empty(); }

  bool at(int x, int y) const { return data_[std::size_t(y) * width_ + x] != 0; }
  void set(int x, int y, bool value = true) { data_[std::size_t(y) * width_ + x] = value ? 1 : 0; }
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  const std::vector<std::uint8_t>& data() const { return data_; }
  std::vector<std::uint8_t>& data() { return data_; }

  std::size_t count() const;
  // Tight box of set pixels; an empty box when no pixel is set.
  Box bbox() const;

  // this AND NOT other; sizes must match.
  Mask minus(const Mask& other) const;
  Mask& operator|=(const Mask& other);
  bool is_subset_of(const Mask& other) const;
  std::size_t intersection_count(const Mask& other) const;

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

double mask_iou(const Mask& a, const Mask& b);

// 8-bit RGB image, row-major, interleaved.
class Image {
 public:
  Image() = default;
  Image(int width, int height) : width_(width), height_(height), rgb_(std::size_t(width) * height * 3, 0) {}

  int width() const { return width_; }
  int height() const { return height_; }

  std::uint8_t* pixel(int x, int y) { return &rgb_[(std::size_t(y) * width_ + x) * 3]; }
  const std::uint8_t* pixel(int x, int y) const { return &rgb_[(std::size_t(y) * width_ + x) * 3]; }
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    std::uint8_t* p = pixel(x, y);
    p[0] = r;
    p[1] = g;
    p[2] = b;
  }

  const std::vector<std::uint8_t>& data() const { return rgb_; }
  std::vector<std::uint8_t>& data() { return rgb_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> rgb_;
};

// Per-pixel metric depth; +inf where nothing was rendered.
class DepthMap {
 public:
  DepthMap() = default;
  DepthMap(int width, int height)
      : width_(width), height_(height),
        depth_(std::size_t(width) * height, std::numeric_limits<double>::infinity()) {}

  int width() const { return width_; }
  int height() const { return height_; }
  double at(int x, int y) const { return depth_[std::size_t(y) * width_ + x]; }
  void set(int x, int y, double z) { depth_[std::size_t(y) * width_ + x] = z; }
  const std::vector<double>& data() const { return depth_; }

  friend bool operator==(const DepthMap&, const DepthMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> depth_;
};

// A cut-out: pixels and mask of the same size, anchored at (x0, y0) in the
// full image.
struct ImagePatch {
  int x0 = 0;
  int y0 = 0;
  Image pixels;
  Mask mask;

  int width() const { return mask.width(); }
  int height() const { return mask.height(); }
};

// Extracts the bbox-sized patch of `image` under the set pixels of `mask`.
ImagePatch extract_patch(const Image& image, const Mask& full_mask);
// Places a patch mask into a full-size mask of the given dimensions.
Mask place_patch_mask(const ImagePatch& patch, int width, int height);

// Chessboard-distance erosion by `radius` pixels.
Mask erode(const Mask& mask, int radius);
Mask dilate(const Mask& mask, int radius);

// Per-pixel temporal median of equally sized frames.
Image median_image(const std::vector<Image>& frames);

}  // namespace clipart
