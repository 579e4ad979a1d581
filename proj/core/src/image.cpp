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

#include "clipart/image.hpp"

#include <algorithm>
#include <cmath>

#include "clipart/error.hpp"

namespace clipart {

double intersection_area(const Box& a, const Box& b) {
  const double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

double box_iou(const Box& a, const Box& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

Box Mask::bbox() const {
  int min_x = width_, min_y = height_, max_x = -1, max_y = -1;
  for (int y = 0; y < height_; ++y) {
    const std::uint8_t* row = &data_[std::size_t(y) * width_];
    for (int x = 0; x < width_; ++x) {
      if (row[x]) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
      }
    }
  }
  if (max_x < 0) return {};
  return {double(min_x), double(min_y), double(max_x + 1), double(max_y + 1)};
}

namespace {
void require_same_size(const Mask& a, const Mask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    fail(ErrorCode::kSizeMismatch, "mask sizes differ");
  }
}
}  // namespace

Mask Mask::minus(const Mask& other) const {
  require_same_size(*this, other);
  Mask out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] & (other.data_[i] ^ 1);
  return out;
}

Mask& Mask::operator|=(const Mask& other) {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] |= other.data_[i];
  return *this;
}

bool Mask::is_subset_of(const Mask& other) const {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (data_[i] && !other.data_[i]) return false;
  }
  return true;
}

std::size_t Mask::intersection_count(const Mask& other) const {
  require_same_size(*this, other);
  std::size_t n = 0;
  for (std::size_t i = 0; i < data_.size(); ++i) n += data_[i] & other.data_[i];
  return n;
}

double mask_iou(const Mask& a, const Mask& b) {
  const std::size_t inter = a.intersection_count(b);
  const std::size_t uni = a.count() + b.count() - inter;
  return uni > 0 ? double(inter) / double(uni) : 0.0;
}

ImagePatch extract_patch(const Image& image, const Mask& full_mask) {
  if (image.width() != full_mask.width() || image.height() != full_mask.height()) {
    fail(ErrorCode::kSizeMismatch, "image and mask sizes differ");
  }
  const Box box = full_mask.bbox();
  ImagePatch patch;
  if (box.empty()) return patch;
  patch.x0 = int(box.x0);
  patch.y0 = int(box.y0);
  const int w = int(box.width());
  const int h = int(box.height());
  patch.pixels = Image(w, h);
  patch.mask = Mask(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int gx = patch.x0 + x;
      const int gy = patch.y0 + y;
      if (full_mask.at(gx, gy)) {
        patch.mask.set(x, y);
        const std::uint8_t* p = image.pixel(gx, gy);
        patch.pixels.set(x, y, p[0], p[1], p[2]);
      }
    }
  }
  return patch;
}

Mask place_patch_mask(const ImagePatch& patch, int width, int height) {
  Mask out(width, height);
  for (int y = 0; y < patch.height(); ++y) {
    for (int x = 0; x < patch.width(); ++x) {
      if (!patch.mask.at(x, y)) continue;
      const int gx = patch.x0 + x;
      const int gy = patch.y0 + y;
      if (!out.contains(gx, gy)) {
        fail(ErrorCode::kCropOutOfBounds, "patch extends outside the image");
      }
      out.set(gx, gy);
    }
  }
  return out;
}

namespace {

Mask morph(const Mask& mask, int radius, bool erode_op) {
  if (radius <= 0) return mask;
  const int w = mask.width();
  const int h = mask.height();
  // Separable min/max filter with a square structuring element.
  Mask tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool v = erode_op;
      for (int k = -radius; k <= radius; ++k) {
        const int xx = x + k;
        const bool s = (xx >= 0 && xx < w) ? mask.at(xx, y) : false;
        v = erode_op ? (v && s) : (v || s);
      }
      tmp.set(x, y, v);
    }
  }
  Mask out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool v = erode_op;
      for (int k = -radius; k <= radius; ++k) {
        const int yy = y + k;
        const bool s = (yy >= 0 && yy < h) ? tmp.at(x, yy) : false;
        v = erode_op ? (v && s) : (v || s);
      }
      out.set(x, y, v);
    }
  }
  return out;
}

}  // namespace

Mask erode(const Mask& mask, int radius) { return morph(mask, radius, true); }
Mask dilate(const Mask& mask, int radius) { return morph(mask, radius, false); }

Image median_image(const std::vector<Image>& frames) {
  if (frames.empty()) fail(ErrorCode::kInvalidArgument, "no frames for median image");
  const int w = frames.front().width();
  const int h = frames.front().height();
  for (const Image& f : frames) {
    if (f.width() != w || f.height() != h) fail(ErrorCode::kSizeMismatch, "frame sizes differ");
  }
  Image out(w, h);
  std::vector<std::uint8_t> values(frames.size());
  const std::size_t mid = frames.size() / 2;
  for (std::size_t i = 0; i < out.data().size(); ++i) {
    for (std::size_t k = 0; k < frames.size(); ++k) values[k] = frames[k].data()[i];
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    out.data()[i] = values[mid];
  }
  return out;
}

}  // namespace clipart
