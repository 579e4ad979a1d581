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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "clipart/types.hpp"

namespace clipart {

// Twelve semantic vehicle keypoints: wheels (ground contacts), lights, roof
// corners. "left" is the object +x side.
inline constexpr std::array<std::string_view, 12> kVehicleKeypointNames = {
    "front_left_wheel", "front_right_wheel", "rear_left_wheel", "rear_right_wheel",
    "front_left_light", "front_right_light", "rear_left_light", "rear_right_light",
    "front_left_roof",  "front_right_roof",  "rear_left_roof",  "rear_right_roof",
};

struct ShapeCoefficients {
  Eigen::VectorXd alpha;

  int size() const { return int(alpha.size()); }
  static ShapeCoefficients zeros(int k) { return {Eigen::VectorXd::Zero(k)}; }
};

// Linear keypoint shape model X = mean + sum_k alpha_k Q_k in the object
// frame (x left, y up, z forward; ground contact at y = 0).
class ShapeBasis {
 public:
  // Validates and canonicalizes: the mean is shifted so that its x/z
  // centroid is the origin and its contact keypoints (names containing
  // "wheel", or the lowest point when there are none) sit at y = 0. Shifts
  // below 1e-12 m are skipped so canonical inputs load bit-exactly.
  static ShapeBasis create(std::vector<std::string> names, PointMatrix3 mean,
                           std::vector<PointMatrix3> components, Eigen::VectorXd scales);

  int num_keypoints() const { return int(mean_.rows()); }
  int num_components() const { return int(components_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const PointMatrix3& mean() const { return mean_; }
  const std::vector<PointMatrix3>& components() const { return components_; }
  const Eigen::VectorXd& scales() const { return scales_; }

  std::optional<int> index_of(std::string_view name) const;
  // Indices of the ground-contact (wheel) keypoints, in keypoint order.
  const std::vector<int>& contact_indices() const { return contacts_; }

 private:
  ShapeBasis() = default;

  std::vector<std::string> names_;
  PointMatrix3 mean_;
  std::vector<PointMatrix3> components_;
  Eigen::VectorXd scales_;
  std::vector<int> contacts_;
};

// Throws kDimensionMismatch when coeffs has the wrong length.
PointMatrix3 instantiate(const ShapeBasis& basis, const ShapeCoefficients& coeffs);

// Least-squares coefficients for `target`, clamped to +-3 scales.
ShapeCoefficients fit_coefficients(const ShapeBasis& basis, const PointMatrix3& target);

ShapeCoefficients clamp_coefficients(const ShapeBasis& basis, ShapeCoefficients coeffs);

inline constexpr double kCoefficientClampSigmas = 3.0;

std::string serialize_basis(const ShapeBasis& basis);
ShapeBasis parse_basis(const std::string& text, const std::string& source);
ShapeBasis load_basis(const std::filesystem::path& path);
void save_basis(const ShapeBasis& basis, const std::filesystem::path& path);

// Toy vehicle basis: PCA over five hand-made box-car keypoint sets
// (sedan, hatchback, SUV, compact, van). num_components in [0, 4].
ShapeBasis make_toy_basis(int num_components = 2);

}  // namespace clipart
