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

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace clipart {

enum class ObjectClass { kCar, kPerson };

std::string_view to_string(ObjectClass cls);
std::optional<ObjectClass> parse_object_class(std::string_view name);

// Keypoint occlusion category. The numeric values are the on-disk codes.
enum class Visibility : int {
  kOccludedByOthers = 0,
  kSelfOccluded = 1,
  kVisible = 2,
  kMissing = 3,
};

std::optional<Visibility> visibility_from_code(int code);

using PointMatrix2 = Eigen::Matrix<double, Eigen::Dynamic, 2>;
using PointMatrix3 = Eigen::Matrix<double, Eigen::Dynamic, 3>;

struct Keypoints2D {
  PointMatrix2 points;
  std::vector<Visibility> visibility;
  std::vector<double> confidence;

  int size() const { return int(points.rows()); }
  // Throws kDimensionMismatch / kInvalidArgument when inconsistent.
  void validate() const;

  static Keypoints2D all_visible(const PointMatrix2& points);
};

}  // namespace clipart
