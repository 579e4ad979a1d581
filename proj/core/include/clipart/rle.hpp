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
#include <vector>

#include "clipart/image.hpp"

namespace clipart {

// Column-major run-length encoding. counts alternate background/foreground
// runs and always start with a (possibly empty) background run.
struct RleMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint32_t> counts;

  friend bool operator==(const RleMask&, const RleMask&) = default;
};

// Canonical encoding: only the first run may be zero-length.
RleMask rle_encode(const Mask& mask);

// Throws kCountOverflow if the runs exceed height*width and kSizeMismatch if
// they fall short of it.
Mask rle_decode(const RleMask& rle);

// Number of foreground pixels, without decoding.
std::uint64_t rle_area(const RleMask& rle);

// Checks sum and canonical form; throws kCountOverflow/kSizeMismatch or
// kValidationError for zero-length interior runs.
void validate_rle(const RleMask& rle);

}  // namespace clipart
