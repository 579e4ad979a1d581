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

#include "clipart/types.hpp"

#include <cmath>

#include "clipart/error.hpp"

namespace clipart {

std::string_view to_string(ObjectClass cls) {
  switch (cls) {
    case ObjectClass::kCar: return "car";
    case ObjectClass::kPerson: return "person";
  }
  return "car";
}

std::optional<ObjectClass> parse_object_class(std::string_view name) {
  if (name == "car") return ObjectClass::kCar;
  if (name == "person") return ObjectClass::kPerson;
  return std::nullopt;
}

std::optional<Visibility> visibility_from_code(int code) {
  if (code < 0 || code > 3) return std::nullopt;
  return static_cast<Visibility>(code);
}

void Keypoints2D::validate() const {
  const std::size_t n = std::size_t(points.rows());
  if (visibility.size() != n || confidence.size() != n) {
    fail(ErrorCode::kDimensionMismatch, "keypoint arrays have inconsistent lengths");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(confidence[i]) || confidence[i] < 0.0 || confidence[i] > 1.0) {
      fail(ErrorCode::kInvalidArgument, "keypoint confidence must lie in [0, 1]");
    }
    if (visibility[i] != Visibility::kMissing && !points.row(Eigen::Index(i)).allFinite()) {
      fail(ErrorCode::kInvalidArgument, "non-finite keypoint location");
    }
  }
}

Keypoints2D Keypoints2D::all_visible(const PointMatrix2& points) {
  Keypoints2D kp;
  kp.points = points;
  kp.visibility.assign(std::size_t(points.rows()), Visibility::kVisible);
  kp.confidence.assign(std::size_t(points.rows()), 1.0);
  return kp;
}

}  // namespace clipart
