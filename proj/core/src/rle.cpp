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

#include "clipart/rle.hpp"

#include <sstream>

#include "clipart/error.hpp"

namespace clipart {

RleMask rle_encode(const Mask& mask) {
  const int h = mask.height();
  const int w = mask.width();
  if (mask.data().size() != std::size_t(h) * std::size_t(w)) {
    fail(ErrorCode::kSizeMismatch, "mask buffer does not match its dimensions");
  }
  RleMask rle;
  rle.height = h;
  rle.width = w;
  std::uint8_t current = 0;
  std::uint32_t run = 0;
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) {
      const std::uint8_t v = mask.at(x, y) ? 1 : 0;
      if (v != current) {
        rle.counts.push_back(run);
        run = 0;
        current = v;
      }
      ++run;
    }
  }
  rle.counts.push_back(run);
  return rle;
}

Mask rle_decode(const RleMask& rle) {
  if (rle.height < 0 || rle.width < 0) {
    fail(ErrorCode::kSizeMismatch, "negative RLE dimensions");
  }
  const std::uint64_t total = std::uint64_t(rle.height) * std::uint64_t(rle.width);
  Mask mask(rle.width, rle.height);
  std::uint64_t pos = 0;
  std::uint8_t value = 0;
  for (std::uint32_t c : rle.counts) {
    if (c > total - pos) {
      std::ostringstream msg;
      msg << "RLE runs exceed " << rle.height << "x" << rle.width << " pixels";
      fail(ErrorCode::kCountOverflow, msg.str());
    }
    if (value) {
      for (std::uint64_t i = pos; i < pos + c; ++i) {
        const int x = int(i / std::uint64_t(rle.height));
        const int y = int(i % std::uint64_t(rle.height));
        mask.set(x, y);
      }
    }
    pos += c;
    value ^= 1;
  }
  if (pos != total) {
    std::ostringstream msg;
    msg << "RLE runs cover " << pos << " of " << total << " pixels";
    fail(ErrorCode::kSizeMismatch, msg.str());
  }
  return mask;
}

std::uint64_t rle_area(const RleMask& rle) {
  std::uint64_t area = 0;
  for (std::size_t i = 1; i < rle.counts.size(); i += 2) area += rle.counts[i];
  return area;
}

void validate_rle(const RleMask& rle) {
  if (rle.height <= 0 || rle.width <= 0) {
    fail(ErrorCode::kSizeMismatch, "RLE dimensions must be positive");
  }
  const std::uint64_t total = std::uint64_t(rle.height) * std::uint64_t(rle.width);
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < rle.counts.size(); ++i) {
    const std::uint32_t c = rle.counts[i];
    if (c > total - sum) fail(ErrorCode::kCountOverflow, "RLE runs exceed the mask size");
    if (c == 0 && i > 0) fail(ErrorCode::kValidationError, "zero-length interior RLE run");
    sum += c;
  }
  if (sum != total) fail(ErrorCode::kSizeMismatch, "RLE runs do not cover the mask");
}

}  // namespace clipart
