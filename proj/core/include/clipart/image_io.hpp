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

#include <filesystem>

#include "clipart/image.hpp"

namespace clipart {

// Binary PPM (P6, maxval 255).
void write_ppm(const Image& image, const std::filesystem::path& path);
Image read_ppm(const std::filesystem::path& path);

// Little-endian grayscale PFM ("Pf", scale -1). Rows are stored bottom-up as
// the format requires; +inf is preserved.
void write_pfm(const DepthMap& depth, const std::filesystem::path& path);
DepthMap read_pfm(const std::filesystem::path& path);

}  // namespace clipart
