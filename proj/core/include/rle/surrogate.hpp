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

#ifndef RLE_SURROGATE_HPP_
#define RLE_SURROGATE_HPP_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "rle/perturb.hpp"

namespace rle {

enum class Penalty { kL1, kL2 };

std::string_view penalty_name(Penalty p);
Penalty parse_penalty(std::string_view name);

struct SurrogateSettings {
  double lambda = 0.01;
  Penalty penalty = Penalty::kL1;
  // Coordinate descent stops once the largest coordinate update in a sweep
  // falls below tol.
  double tol = 1e-6;
  std::size_t max_iter = 10000;
};

// Rows of (adjacency features, black-box score). Every row has the same
// feature dimension.
class AuxiliaryDataset {
 public:
  explicit AuxiliaryDataset(std::size_t feature_dim);

  void add(AdjacencyFeatureVector features, double target);
  void reserve(std::size_t rows);

  std::size_t feature_dim() const noexcept { return feature_dim_; }
  std::size_t size() const noexcept { return targets_.size(); }
  bool empty() const noexcept { return targets_.empty(); }

  const AdjacencyFeatureVector& features(std::size_t i) const { return features_.at(i); }
  double target(std::size_t i) const { return targets_.at(i); }
  std::span<const double> targets() const noexcept { return targets_; }

 private:
  std::size_t feature_dim_;
  std::vector<AdjacencyFeatureVector> features_;
  std::vector<double> targets_;
};

struct SurrogateFit {
  std::vector<double> weights;
  double intercept = 0.0;
  double lambda = 0.0;
  Penalty penalty = Penalty::kL1;
  double objective_value = 0.0;
  std::size_t iterations_used = 0;
  bool converged = false;
  // Objective after each coordinate-descent sweep (one entry for kL2).
  std::vector<double> objective_trace;
};

// Minimizes (1/m) * sum_i (y_i - w.x_i - b)^2 + lambda * Omega(w), with
// Omega = ||w||_1 (kL1) or ||w||_2^2 (kL2) and the intercept b unpenalized.
// Features are mean-centered for the solve; weights are reported in the
// original basis. Deterministic: fixed coordinate order, no randomness.
SurrogateFit fit(const AuxiliaryDataset& dataset, const SurrogateSettings& settings = {});

double predict(const SurrogateFit& fit, const AdjacencyFeatureVector& features);
double predict(const SurrogateFit& fit, std::span<const double> features);

// Value of the fit objective for arbitrary (weights, intercept).
double surrogate_objective(const AuxiliaryDataset& dataset, std::span<const double> weights,
                           double intercept, double lambda, Penalty penalty);

// Smallest lambda for which the all-zero weight vector is L1-optimal:
// 2 * max_j |(1/m) sum_i xc_ij * yc_i| on centered data.
double lambda_max(const AuxiliaryDataset& dataset);

}  // namespace rle

#endif  // RLE_SURROGATE_HPP_
