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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <filesystem>
#include <random>

#include "clipart/error.hpp"
#include "clipart/shape_model.hpp"

using namespace clipart;

namespace {

ShapeBasis random_basis(std::mt19937_64& gen, int n, int k) {
  std::normal_distribution<double> g(0, 1);
  std::vector<std::string> names;
  PointMatrix3 mean(n, 3);
  for (int i = 0; i < n; ++i) {
    names.push_back("p" + std::to_string(i));
    mean.row(i) << g(gen), std::abs(g(gen)), g(gen);
  }
  std::vector<PointMatrix3> comps;
  for (int c = 0; c < k; ++c) {
    PointMatrix3 q(n, 3);
    for (int i = 0; i < n; ++i) q.row(i) << g(gen), g(gen), g(gen);
    comps.push_back(q);
  }
  Eigen::VectorXd scales(k);
  for (int c = 0; c < k; ++c) scales(c) = 0.5 + std::abs(g(gen));
  return ShapeBasis::create(names, mean, comps, scales);
}

}  // namespace

TEST(ShapeModel, ZeroCoefficientsGiveMeanBitwise) {
  const ShapeBasis b = make_toy_basis(2);
  const PointMatrix3 X = instantiate(b, ShapeCoefficients::zeros(2));
  EXPECT_TRUE((X.array() == b.mean().array()).all());
}

TEST(ShapeModel, LinearityWithOnesComponent) {
  PointMatrix3 mean(4, 3);
  mean << 1, 0, 1, -1, 0, 1, 1, 0, -1, -1, 1, -1;
  PointMatrix3 ones = PointMatrix3::Ones(4, 3);
  const ShapeBasis b = ShapeBasis::create({"a", "b", "c", "d"}, mean, {ones}, Eigen::VectorXd::Ones(1));
  ShapeCoefficients c{Eigen::VectorXd::Constant(1, 2.0)};
  const PointMatrix3 X = instantiate(b, c);
  EXPECT_NEAR((X - (b.mean() + 2.0 * ones)).norm(), 0, 1e-15);
}

TEST(ShapeModel, LinearityProperty) {
  std::mt19937_64 gen(8);
  const ShapeBasis b = random_basis(gen, 12, 3);
  std::normal_distribution<double> g(0, 1);
  for (int t = 0; t < 20; ++t) {
    ShapeCoefficients a{Eigen::Vector3d(g(gen), g(gen), g(gen))};
    ShapeCoefficients c{Eigen::Vector3d(g(gen), g(gen), g(gen))};
    ShapeCoefficients sum{a.alpha + c.alpha};
    const PointMatrix3 lhs = instantiate(b, sum);
    const PointMatrix3 rhs = instantiate(b, a) + instantiate(b, c) - b.mean();
    ASSERT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ShapeModel, DimensionMismatch) {
  const ShapeBasis b = make_toy_basis(2);
  try {
    instantiate(b, ShapeCoefficients::zeros(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  try {
    fit_coefficients(b, PointMatrix3::Zero(5, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(ShapeModel, FitRecoversCoefficientsViaNormalEquations) {
  std::mt19937_64 gen(21);
  const ShapeBasis b = random_basis(gen, 12, 4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd alpha(4);
    for (int k = 0; k < 4; ++k) alpha(k) = u(gen) * 2.5 * b.scales()(k);
    const PointMatrix3 X = instantiate(b, {alpha});
    // Independent normal equations over flattened components.
    Eigen::MatrixXd A(36, 4);
    for (int k = 0; k < 4; ++k) {
      const PointMatrix3& q = b.components()[std::size_t(k)];
      for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 3; ++j) A(3 * i + j, k) = q(i, j);
    }
    Eigen::VectorXd rhs(36);
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 3; ++j) rhs(3 * i + j) = X(i, j) - b.mean()(i, j);
    const Eigen::VectorXd oracle_alpha = (A.transpose() * A).ldlt().solve(A.transpose() * rhs);
    const ShapeCoefficients fitted = fit_coefficients(b, X);
    ASSERT_LT((fitted.alpha - alpha).norm(), 1e-9);
    ASSERT_LT((oracle_alpha - alpha).norm(), 1e-9);
  }
}

TEST(ShapeModel, MeanTargetAndOrthogonalNoiseGiveZero) {
  const ShapeBasis b = make_toy_basis(2);
  EXPECT_LT(fit_coefficients(b, b.mean()).alpha.norm(), 1e-12);
  // Build noise orthogonal to both components by Gram-Schmidt.
  std::mt19937_64 gen(2);
  std::normal_distribution<double> g(0, 0.1);
  PointMatrix3 noise(12, 3);
  for (int i = 0; i < 12; ++i) noise.row(i) << g(gen), g(gen), g(gen);
  for (int pass = 0; pass < 2; ++pass) {
    for (const PointMatrix3& q : b.components()) {
      noise -= (noise.cwiseProduct(q).sum() / q.squaredNorm()) * q;
    }
  }
  EXPECT_LT(fit_coefficients(b, b.mean() + noise).alpha.norm(), 1e-9);
}

TEST(ShapeModel, FitClampsToThreeScales) {
  const ShapeBasis b = make_toy_basis(2);
  Eigen::VectorXd alpha = b.scales() * 10.0;
  const ShapeCoefficients c = fit_coefficients(b, instantiate(b, {alpha}));
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(c.alpha(k), 3.0 * b.scales()(k), 1e-12);
}

TEST(ShapeModel, ToyBasisShape) {
  const ShapeBasis b = make_toy_basis(2);
  EXPECT_EQ(b.num_keypoints(), 12);
  EXPECT_EQ(b.num_components(), 2);
  EXPECT_EQ(b.contact_indices().size(), 4u);
  for (int idx : b.contact_indices()) EXPECT_NEAR(b.mean()(idx, 1), 0.0, 1e-12);
  EXPECT_NEAR(b.mean().col(0).mean(), 0.0, 1e-9);
  EXPECT_NEAR(b.mean().col(2).mean(), 0.0, 1e-9);
  for (const PointMatrix3& q : b.components()) EXPECT_GT(q.norm(), 0.0);
  for (int k = 0; k < b.num_components(); ++k) EXPECT_GT(b.scales()(k), 0.0);
}

TEST(ShapeModel, BundledBasisFileMatchesBuiltIn) {
  const ShapeBasis file = load_basis(CLIPART_BASIS_FILE);
  const ShapeBasis built = make_toy_basis(2);
  EXPECT_TRUE((file.mean().array() == built.mean().array()).all());
  EXPECT_EQ(serialize_basis(file), serialize_basis(built));
}

TEST(ShapeModel, SerializationRoundTripIsBitExact) {
  std::mt19937_64 gen(31);
  for (int t = 0; t < 10; ++t) {
    const ShapeBasis b = random_basis(gen, 4 + t, t % 4);
    const std::string text = serialize_basis(b);
    const ShapeBasis back = parse_basis(text, "mem");
    EXPECT_EQ(serialize_basis(back), text);
    EXPECT_TRUE((back.mean().array() == b.mean().array()).all());
    for (int k = 0; k < b.num_components(); ++k) {
      EXPECT_TRUE((back.components()[std::size_t(k)].array() == b.components()[std::size_t(k)].array()).all());
    }
    const auto path = std::filesystem::temp_directory_path() / "clipart_basis_rt.json";
    save_basis(b, path);
    EXPECT_EQ(serialize_basis(load_basis(path)), text);
  }
}

TEST(ShapeModel, TooFewKeypointsIsParseError) {
  const std::string text = R"({"version": "clipart-shape-basis/1", "n_keypoints": 3,
    "names": ["a", "b", "c"], "mean": [[0, 0, 0], [1, 0, 0], [0, 0, 1]], "components": [], "scales": []})";
  try {
    parse_basis(text, "three.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("n_keypoints"), std::string::npos);
  }
  PointMatrix3 mean(3, 3);
  mean << 0, 0, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_THROW(ShapeBasis::create({"a", "b", "c"}, mean, {}, Eigen::VectorXd()), Error);
}

TEST(ShapeModel, CanonicalizationShiftsMean) {
  PointMatrix3 mean(4, 3);
  mean << 1, 0.5, 1, 3, 0.5, 1, 1, 0.5, 3, 3, 2.0, 3;
  const ShapeBasis b = ShapeBasis::create({"wheel_a", "wheel_b", "wheel_c", "roof"}, mean, {}, Eigen::VectorXd());
  EXPECT_NEAR(b.mean().col(0).mean(), 0, 1e-12);
  EXPECT_NEAR(b.mean().col(2).mean(), 0, 1e-12);
  EXPECT_NEAR(b.mean()(0, 1), 0, 1e-12);
  EXPECT_NEAR(b.mean()(3, 1), 1.5, 1e-12);
  EXPECT_EQ(b.contact_indices(), (std::vector<int>{0, 1, 2}));
}
