/*
 * Copyright 2026 The RLE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rle/surrogate.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "rle/errors.hpp"

namespace rle {
namespace {

AuxiliaryDataset random_dataset(std::size_t rows, std::size_t dim, std::uint64_t seed, double density = 0.5) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution bit(density);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<double> truth(dim);
  for (auto& t : truth) t = noise(rng) * 10.0;
  AuxiliaryDataset d(dim);
  for (std::size_t i = 0; i < rows; ++i) {
    AdjacencyFeatureVector x;
    double y = 0.3;
    for (std::size_t j = 0; j < dim; ++j) {
      x.values.push_back(bit(rng) ? 1 : 0);
      y += truth[j] * x.values.back();
    }
    d.add(std::move(x), y + noise(rng));
  }
  return d;
}

// Ordinary least squares with an intercept column, solved by Eigen's QR.
Eigen::VectorXd ols_oracle(const AuxiliaryDataset& d) {
  const auto m = static_cast<Eigen::Index>(d.size());
  const auto p = static_cast<Eigen::Index>(d.feature_dim());
  Eigen::MatrixXd x(m, p + 1);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = d.features(i).values[j];
    x(i, p) = 1.0;
    y(i) = d.target(i);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  EXPECT_EQ(qr.rank(), p + 1) << "oracle design must be full rank";
  return qr.solve(y);
}

// Per-coordinate KKT residual on centered data; 0 at an exact L1 optimum.
std::vector<double> kkt_residuals(const AuxiliaryDataset& d, const SurrogateFit& f, double lambda) {
  const std::size_t m = d.size();
  const std::size_t p = d.feature_dim();
  std::vector<double> mean_x(p, 0.0);
  double mean_y = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mean_y += d.target(i);
    for (std::size_t j = 0; j < p; ++j) mean_x[j] += d.features(i).values[j];
  }
  mean_y /= m;
  for (auto& v : mean_x) v /= m;
  std::vector<double> resid(m);
  for (std::size_t i = 0; i < m; ++i) {
    double r = d.target(i) - mean_y;
    for (std::size_t j = 0; j < p; ++j) r -= f.weights[j] * (d.features(i).values[j] - mean_x[j]);
    resid[i] = r;
  }
  std::vector<double> out(p);
  for (std::size_t j = 0; j < p; ++j) {
    double g = 0.0;
    for (std::size_t i = 0; i < m; ++i) g += (d.features(i).values[j] - mean_x[j]) * resid[i];
    g *= 2.0 / m;
    if (f.weights[j] != 0.0) {
      out[j] = std::abs(g - lambda * (f.weights[j] > 0 ? 1.0 : -1.0));
    } else {
      out[j] = std::max(0.0, std::abs(g) - lambda);
    }
  }
  return out;
}

TEST(Fit, ConstantTargetGivesZeroWeights) {
  AuxiliaryDataset d(4);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    AdjacencyFeatureVector x;
    for (int j = 0; j < 4; ++j) x.values.push_back(rng() % 2);
    d.add(std::move(x), 0.7);
  }
  for (auto pen : {Penalty::kL1, Penalty::kL2}) {
    const auto f = fit(d, {.lambda = 0.05, .penalty = pen});
    for (double w : f.weights) EXPECT_EQ(w, 0.0);
    EXPECT_NEAR(f.intercept, 0.7, 1e-12);
  }
}

TEST(Fit, OlsOracleAtLambdaZero) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto d = random_dataset(20, 6, seed);
    const Eigen::VectorXd beta = ols_oracle(d);
    for (auto pen : {Penalty::kL1, Penalty::kL2}) {
      const auto f = fit(d, {.lambda = 0.0, .penalty = pen, .tol = 1e-12, .max_iter = 100000});
      double err = std::abs(f.intercept - beta(6));
      for (int j = 0; j < 6; ++j) err = std::max(err, std::abs(f.weights[j] - beta(j)));
      EXPECT_LT(err, 1e-6) << "seed " << seed << " penalty " << penalty_name(pen);
      for (std::size_t i = 0; i < d.size(); ++i) {
        double oracle = beta(6);
        for (int j = 0; j < 6; ++j) oracle += beta(j) * d.features(i).values[j];
        EXPECT_NEAR(predict(f, d.features(i)), oracle, 1e-6);
      }
    }
  }
}

TEST(Fit, L1KktAtConvergence) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto d = random_dataset(200, 15, seed + 100, 0.3);
    for (double lambda : {0.001, 0.01, 0.1}) {
      const SurrogateSettings s{.lambda = lambda, .tol = 1e-6};
      const auto f = fit(d, s);
      ASSERT_TRUE(f.converged);
      for (double r : kkt_residuals(d, f, lambda)) EXPECT_LT(r, 10 * s.tol);
    }
  }
}

TEST(Fit, LambdaMaxZeroesWeights) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto d = random_dataset(60, 10, seed + 7);
    const double lmax = lambda_max(d);
    EXPECT_GT(lmax, 0.0);
    for (double scale : {1.0, 1.5, 10.0}) {
      const auto f = fit(d, {.lambda = lmax * scale});
      for (double w : f.weights) EXPECT_EQ(w, 0.0) << "scale " << scale;
    }
    const auto below = fit(d, {.lambda = lmax * 0.9});
    EXPECT_TRUE(std::any_of(below.weights.begin(), below.weights.end(), [](double w) { return w != 0.0; }));
  }
}

TEST(Fit, ObjectiveNonIncreasingPerSweep) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto d = random_dataset(40, 28, seed + 50, 0.4);
    const auto f = fit(d, {.lambda = 0.005, .tol = 1e-9});
    ASSERT_GE(f.objective_trace.size(), 2u);
    for (std::size_t k = 1; k < f.objective_trace.size(); ++k) {
      EXPECT_LE(f.objective_trace[k], f.objective_trace[k - 1] * (1 + 1e-12) + 1e-15) << "sweep " << k;
    }
    EXPECT_DOUBLE_EQ(f.objective_value, f.objective_trace.back());
    EXPECT_NEAR(f.objective_value, surrogate_objective(d, f.weights, f.intercept, 0.005, Penalty::kL1), 1e-9);
  }
}

TEST(Fit, L2MatchesRidgeNormalEquations) {
  const auto d = random_dataset(30, 5, 3);
  const double lambda = 0.2;
  const auto f = fit(d, {.lambda = lambda, .penalty = Penalty::kL2});
  // Centered ridge: (Xc'Xc/m + lambda I) w = Xc'yc/m.
  const auto m = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXd x(m, 5);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (int j = 0; j < 5; ++j) x(i, j) = d.features(i).values[j];
    y(i) = d.target(i);
  }
  const Eigen::RowVectorXd mx = x.colwise().mean();
  const double my = y.mean();
  const Eigen::MatrixXd xc = x.rowwise() - mx;
  const Eigen::VectorXd yc = y.array() - my;
  const Eigen::VectorXd w =
      (xc.transpose() * xc / m + lambda * Eigen::MatrixXd::Identity(5, 5)).ldlt().solve(xc.transpose() * yc / m);
  for (int j = 0; j < 5; ++j) EXPECT_NEAR(f.weights[j], w(j), 1e-10);
  EXPECT_NEAR(f.intercept, my - mx.dot(w), 1e-10);
}

TEST(Fit, L2RankDeficientAtLambdaZero) {
  AuxiliaryDataset d(2);
  for (int i = 0; i < 6; ++i) {
    const std::uint8_t b = i % 2;
    d.add({{b, b}}, 1.0 * i);
  }
  try {
    fit(d, {.lambda = 0.0, .penalty = Penalty::kL2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRankDeficient);
  }
}

TEST(Fit, UnderdeterminedL1IsFinite) {
  const auto d = random_dataset(10, 36, 9);
  const auto f = fit(d);
  EXPECT_TRUE(std::isfinite(f.objective_value));
  for (double w : f.weights) EXPECT_TRUE(std::isfinite(w));
}

TEST(Fit, Deterministic) {
  const auto d = random_dataset(80, 20, 11);
  const auto a = fit(d);
  const auto b = fit(d);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.intercept, b.intercept);
  EXPECT_EQ(a.objective_trace, b.objective_trace);
}

TEST(Fit, Errors) {
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code([] { fit(AuxiliaryDataset(0)); }), ErrorCode::kDegenerate);
  EXPECT_EQ(code([] { fit(AuxiliaryDataset(3)); }), ErrorCode::kDegenerate);
  AuxiliaryDataset d(2);
  EXPECT_EQ(code([&] { d.add({{1}}, 0.0); }), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code([&] { d.add({{1, 0}}, std::numeric_limits<double>::quiet_NaN()); }), ErrorCode::kNonFinite);
  d.add({{1, 0}}, 1.0);
  EXPECT_EQ(code([&] { fit(d, {.lambda = -1.0}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code([&] { fit(d, {.lambda = std::numeric_limits<double>::infinity()}); }), ErrorCode::kInvalidArgument);
}

TEST(Predict, Examples) {
  SurrogateFit f;
  f.weights = {0.0, 0.0, 0.0};
  f.intercept = 0.7;
  EXPECT_DOUBLE_EQ(predict(f, AdjacencyFeatureVector{{1, 0, 1}}), 0.7);
  SurrogateFit g;
  g.weights = {1.0, -1.0};
  EXPECT_DOUBLE_EQ(predict(g, AdjacencyFeatureVector{{1, 1}}), 0.0);
  EXPECT_THROW(predict(g, AdjacencyFeatureVector{{1}}), Error);
  const std::vector<double> dense = {0.5, 0.25};
  EXPECT_DOUBLE_EQ(predict(g, dense), 0.25);
}

}  // namespace
}  // namespace rle
