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

#include "clipart/shape_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>

#include "clipart/error.hpp"
#include "json_util.hpp"

namespace clipart {

using json_detail::Json;

ShapeBasis ShapeBasis::create(std::vector<std::string> names, PointMatrix3 mean,
                              std::vector<PointMatrix3> components, Eigen::VectorXd scales) {
  const Eigen::Index n = mean.rows();
  if (n < 4) fail(ErrorCode::kValidationError, "shape basis needs at least 4 keypoints");
  if (std::size_t(n) != names.size()) {
    fail(ErrorCode::kDimensionMismatch, "keypoint name count differs from mean shape rows");
  }
  std::set<std::string> unique(names.begin(), names.end());
  if (unique.size() != names.size()) fail(ErrorCode::kValidationError, "duplicate keypoint names");
  if (!mean.allFinite()) fail(ErrorCode::kValidationError, "non-finite mean shape");
  if (std::size_t(scales.size()) != components.size()) {
    fail(ErrorCode::kDimensionMismatch, "scale count differs from component count");
  }
  for (std::size_t k = 0; k < components.size(); ++k) {
    const PointMatrix3& q = components[k];
    if (q.rows() != n) fail(ErrorCode::kDimensionMismatch, "component row count differs from mean");
    if (!q.allFinite() || !(q.norm() > 0.0)) {
      fail(ErrorCode::kValidationError, "component " + std::to_string(k) + " is zero or non-finite");
    }
    if (!std::isfinite(scales[Eigen::Index(k)]) || !(scales[Eigen::Index(k)] > 0.0)) {
      fail(ErrorCode::kValidationError, "scale " + std::to_string(k) + " must be positive");
    }
  }

  ShapeBasis basis;
  for (int i = 0; i < int(n); ++i) {
    if (names[std::size_t(i)].find("wheel") != std::string::npos) basis.contacts_.push_back(i);
  }

  const double cx = mean.col(0).mean();
  const double cz = mean.col(2).mean();
  double ground = 0.0;
  if (!basis.contacts_.empty()) {
    for (int i : basis.contacts_) ground += mean(i, 1);
    ground /= double(basis.contacts_.size());
  } else {
    ground = mean.col(1).minCoeff();
  }
  if (std::abs(cx) > 1e-12) mean.col(0).array() -= cx;
  if (std::abs(cz) > 1e-12) mean.col(2).array() -= cz;
  if (std::abs(ground) > 1e-12) mean.col(1).array() -= ground;

  basis.names_ = std::move(names);
  basis.mean_ = std::move(mean);
  basis.components_ = std::move(components);
  basis.scales_ = std::move(scales);
  return basis;
}

std::optional<int> ShapeBasis::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return int(i);
  }
  return std::nullopt;
}

PointMatrix3 instantiate(const ShapeBasis& basis, const ShapeCoefficients& coeffs) {
  if (coeffs.size() != basis.num_components()) {
    fail(ErrorCode::kDimensionMismatch, "expected " + std::to_string(basis.num_components()) +
                                            " shape coefficients, got " +
                                            std::to_string(coeffs.size()));
  }
  PointMatrix3 X = basis.mean();
  for (int k = 0; k < coeffs.size(); ++k) {
    const double a = coeffs.alpha[k];
    if (a != 0.0) X += a * basis.components()[std::size_t(k)];
  }
  return X;
}

ShapeCoefficients clamp_coefficients(const ShapeBasis& basis, ShapeCoefficients coeffs) {
  for (int k = 0; k < coeffs.size(); ++k) {
    const double bound = kCoefficientClampSigmas * basis.scales()[k];
    coeffs.alpha[k] = std::clamp(coeffs.alpha[k], -bound, bound);
  }
  return coeffs;
}

ShapeCoefficients fit_coefficients(const ShapeBasis& basis, const PointMatrix3& target) {
  if (target.rows() != basis.num_keypoints()) {
    fail(ErrorCode::kDimensionMismatch, "target keypoint count differs from basis");
  }
  const int k = basis.num_components();
  if (k == 0) return ShapeCoefficients::zeros(0);
  const Eigen::Index m = 3 * target.rows();
  Eigen::MatrixXd A(m, k);
  for (int c = 0; c < k; ++c) {
    const PointMatrix3& q = basis.components()[std::size_t(c)];
    for (Eigen::Index i = 0; i < target.rows(); ++i) {
      for (int j = 0; j < 3; ++j) A(3 * i + j, c) = q(i, j);
    }
  }
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < target.rows(); ++i) {
    for (int j = 0; j < 3; ++j) b(3 * i + j) = target(i, j) - basis.mean()(i, j);
  }
  ShapeCoefficients out{A.colPivHouseholderQr().solve(b)};
  return clamp_coefficients(basis, std::move(out));
}

namespace {

Json matrix_to_json(const PointMatrix3& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
  return rows;
}

PointMatrix3 matrix_from_node(const json_detail::Node& node, std::size_t rows) {
  node.expect_size(rows);
  PointMatrix3 m(Eigen::Index(rows), 3);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto row = node.at(i);
    row.expect_size(3);
    for (std::size_t j = 0; j < 3; ++j) m(Eigen::Index(i), Eigen::Index(j)) = row.at(j).as_double();
  }
  return m;
}

constexpr const char* kBasisVersion = "clipart-shape-basis/1";

}  // namespace

std::string serialize_basis(const ShapeBasis& basis) {
  Json doc;
  doc["version"] = kBasisVersion;
  doc["n_keypoints"] = basis.num_keypoints();
  doc["names"] = basis.names();
  doc["mean"] = matrix_to_json(basis.mean());
  Json comps = Json::array();
  for (const auto& q : basis.components()) comps.push_back(matrix_to_json(q));
  doc["components"] = comps;
  Json scales = Json::array();
  for (Eigen::Index k = 0; k < basis.scales().size(); ++k) scales.push_back(basis.scales()[k]);
  doc["scales"] = scales;
  return json_detail::dump_document(doc);
}

ShapeBasis parse_basis(const std::string& text, const std::string& source) {
  const Json doc = json_detail::parse_document(text, source);
  const auto r = json_detail::root(doc, source);
  const std::string version = r.at("version").as_string();
  if (version != kBasisVersion) {
    fail(ErrorCode::kVersionMismatch, source + ": unsupported shape basis version '" + version + "'");
  }
  const auto n_node = r.at("n_keypoints");
  const std::int64_t n = n_node.as_int();
  if (n < 4) n_node.error("n_keypoints must be at least 4, found " + std::to_string(n));
  if (n > 4096) n_node.invalid("n_keypoints is implausibly large");

  const auto names_node = r.at("names");
  names_node.expect_size(std::size_t(n));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < std::size_t(n); ++i) names.push_back(names_node.at(i).as_string());

  PointMatrix3 mean = matrix_from_node(r.at("mean"), std::size_t(n));

  const auto comps_node = r.at("components");
  const std::size_t k = comps_node.array_size();
  std::vector<PointMatrix3> comps;
  for (std::size_t c = 0; c < k; ++c) comps.push_back(matrix_from_node(comps_node.at(c), std::size_t(n)));

  const auto scales_node = r.at("scales");
  scales_node.expect_size(k);
  Eigen::VectorXd scales(Eigen::Index(k), 1);
  for (std::size_t c = 0; c < k; ++c) scales[Eigen::Index(c)] = scales_node.at(c).as_double();

  try {
    return ShapeBasis::create(std::move(names), std::move(mean), std::move(comps), std::move(scales));
  } catch (const Error& e) {
    fail(ErrorCode::kValidationError, source + ": " + e.what());
  }
}

ShapeBasis load_basis(const std::filesystem::path& path) {
  return parse_basis(json_detail::read_text_file(path), path.string());
}

void save_basis(const ShapeBasis& basis, const std::filesystem::path& path) {
  json_detail::write_text_file(path, serialize_basis(basis));
}

namespace {

struct CarVariant {
  double length, width, height;
  double wheelbase;
  double roof_front, roof_rear;
  double front_light, rear_light;
};

PointMatrix3 car_keypoints(const CarVariant& v) {
  const double wx = v.width / 2.0 - 0.10;
  const double fl = v.width / 2.0 - 0.20;
  const double rl = v.width / 2.0 - 0.15;
  const double rx = v.width / 2.0 - 0.25;
  const double wz = v.wheelbase / 2.0;
  const double lz = v.length / 2.0;
  PointMatrix3 p(12, 3);
  p << wx, 0.0, wz,    -wx, 0.0, wz,    wx, 0.0, -wz,   -wx, 0.0, -wz,
       fl, v.front_light, lz,   -fl, v.front_light, lz,
       rl, v.rear_light, -lz,   -rl, v.rear_light, -lz,
       rx, v.height, v.roof_front,   -rx, v.height, v.roof_front,
       rx, v.height, v.roof_rear,    -rx, v.height, v.roof_rear;
  return p;
}

}  // namespace

ShapeBasis make_toy_basis(int num_components) {
  if (num_components < 0 || num_components > 4) {
    fail(ErrorCode::kInvalidArgument, "toy basis supports 0..4 components");
  }
  const std::array<CarVariant, 5> variants = {{
      {4.60, 1.80, 1.45, 2.70, 0.55, -1.05, 0.70, 0.85},  // sedan
      {4.10, 1.75, 1.50, 2.55, 0.45, -1.55, 0.72, 0.95},  // hatchback
      {4.80, 1.95, 1.75, 2.85, 0.75, -1.85, 0.90, 1.05},  // SUV
      {3.70, 1.65, 1.50, 2.40, 0.35, -1.35, 0.70, 0.90},  // compact
      {5.00, 2.00, 1.95, 3.00, 1.35, -2.20, 0.85, 0.95},  // van
  }};
  static constexpr int kPoints = 12;
  Eigen::MatrixXd data(Eigen::Index(variants.size()), 3 * kPoints);
  for (std::size_t s = 0; s < variants.size(); ++s) {
    const PointMatrix3 p = car_keypoints(variants[s]);
    for (int i = 0; i < kPoints; ++i) {
      for (int j = 0; j < 3; ++j) data(Eigen::Index(s), 3 * i + j) = p(i, j);
    }
  }
  const Eigen::RowVectorXd mean_row = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - mean_row;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);

  auto unflatten = [](const Eigen::VectorXd& v) {
    PointMatrix3 m(kPoints, 3);
    for (int i = 0; i < kPoints; ++i) {
      for (int j = 0; j < 3; ++j) m(i, j) = v(3 * i + j);
    }
    return m;
  };

  std::vector<PointMatrix3> comps;
  Eigen::VectorXd scales(num_components);
  for (int k = 0; k < num_components; ++k) {
    Eigen::VectorXd dir = svd.matrixV().col(k);
    Eigen::Index arg = 0;
    dir.cwiseAbs().maxCoeff(&arg);
    if (dir(arg) < 0.0) dir = -dir;
    comps.push_back(unflatten(dir));
    scales(k) = svd.singularValues()(k) / std::sqrt(double(variants.size() - 1));
  }
  std::vector<std::string> names(kVehicleKeypointNames.begin(), kVehicleKeypointNames.end());
  return ShapeBasis::create(std::move(names), unflatten(mean_row.transpose()), std::move(comps),
                            std::move(scales));
}

}  // namespace clipart
