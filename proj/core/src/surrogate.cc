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

#include <algorithm>
#include <cmath>

#include "rle/errors.hpp"

namespace rle {
namespace {

// Column view of a binary design: row indices where x_ij == 1.
struct SparseColumns {
  std::vector<std::vector<std::uint32_t>> rows;
  std::vector<double> mean;
};

SparseColumns to_columns(const AuxiliaryDataset& data) {
  const std::size_t m = data.size();
  SparseColumns cols;
  cols.rows.resize(data.feature_dim());
  for (std::size_t i = 0; i < m; ++i) {
    const auto& x = data.features(i).values;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j]) cols.rows[j].push_back(static_cast<std::uint32_t>(i));
    }
  }
  cols.mean.resize(data.feature_dim());
  for (std::size_t j = 0; j < cols.rows.size(); ++j) {
    cols.mean[j] = static_cast<double>(cols.rows[j].size()) / static_cast<double>(m);
  }
  return cols;
}

// Shifted by the first value so a constant column has an exact mean.
double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x - v.front();
  return v.front() + s / static_cast<double>(v.size());
}

void validate(const AuxiliaryDataset& data, const SurrogateSettings& s) {
  if (data.feature_dim() == 0) fail(ErrorCode::kDegenerate, "feature dimension is zero");
  if (data.empty()) fail(ErrorCode::kDegenerate, "dataset has no rows");
  if (!std::isfinite(s.lambda) || s.lambda < 0.0) fail(ErrorCode::kInvalidArgument, "lambda must be finite and >= 0");
  if (!(s.tol > 0.0)) fail(ErrorCode::kInvalidArgument, "tol must be > 0");
  if (s.max_iter == 0) fail(ErrorCode::kInvalidArgument, "max_iter must be >= 1");
  for (double y : data.targets()) {
    if (!std::isfinite(y)) fail(ErrorCode::kNonFinite, "dataset contains a non-finite target");
  }
}

double penalty_value(std::span<const double> w, Penalty p) {
  double s = 0.0;
  for (double x : w) s += p == Penalty::kL1 ? std::abs(x) : x * x;
  return s;
}

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

SurrogateFit fit_l1(const AuxiliaryDataset& data, const SurrogateSettings& s) {
  const std::size_t m = data.size();
  const std::size_t d = data.feature_dim();
  const double inv_m = 1.0 / static_cast<double>(m);
  const SparseColumns cols = to_columns(data);
  const double y_mean = mean_of(data.targets());

  // Column variance of the centered design, (1/m) sum xc_ij^2.
  std::vector<double> z(d);
  for (std::size_t j = 0; j < d; ++j) z[j] = cols.mean[j] - cols.mean[j] * cols.mean[j];

  // Residual r_i = base_i + shift. Centering adds the same offset to every
  // row, so a coordinate step only touches the nonzero rows plus one scalar.
  std::vector<double> base(m);
  for (std::size_t i = 0; i < m; ++i) base[i] = data.target(i) - y_mean;
  double shift = 0.0;
  double sum_r = 0.0;
  for (double b : base) sum_r += b;

  SurrogateFit out;
  out.weights.assign(d, 0.0);
  out.lambda = s.lambda;
  out.penalty = Penalty::kL1;
  const double half_lambda = 0.5 * s.lambda;

  auto objective = [&] {
    double sse = 0.0;
    for (double b : base) {
      const double r = b + shift;
      sse += r * r;
    }
    return sse * inv_m + s.lambda * penalty_value(out.weights, Penalty::kL1);
  };

  for (std::size_t sweep = 0; sweep < s.max_iter; ++sweep) {
    double max_step = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (z[j] <= 1e-15) continue;
      const auto& nz = cols.rows[j];
      double sum_nz = 0.0;
      for (auto i : nz) sum_nz += base[i];
      const double xr = sum_nz + static_cast<double>(nz.size()) * shift - cols.mean[j] * sum_r;
      const double rho = xr * inv_m + z[j] * out.weights[j];
      const double next = soft_threshold(rho, half_lambda) / z[j];
      const double step = next - out.weights[j];
      if (step == 0.0) continue;
      for (auto i : nz) base[i] -= step;
      shift += cols.mean[j] * step;
      sum_r += (static_cast<double>(m) * cols.mean[j] - static_cast<double>(nz.size())) * step;
      out.weights[j] = next;
      max_step = std::max(max_step, std::abs(step));
    }
    out.objective_trace.push_back(objective());
    out.iterations_used = sweep + 1;
    if (max_step < s.tol) {
      out.converged = true;
      break;
    }
  }

  out.objective_value = out.objective_trace.back();
  double offset = 0.0;
  for (std::size_t j = 0; j < d; ++j) offset += cols.mean[j] * out.weights[j];
  out.intercept = y_mean - offset;
  return out;
}

// In-place Cholesky solve of the SPD system a * x = b (a is n x n, row-major).
// Returns false if a pivot is not safely positive.
bool cholesky_solve(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a[i * n + i]));
  const double floor = std::max(scale, 1.0) * 1e-12;
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
    if (!(diag > floor)) return false;
    const double l = std::sqrt(diag);
    a[j * n + j] = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = v / l;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= a[i * n + k] * b[k];
    b[i] = v / a[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double v = b[i];
    for (std::size_t k = i + 1; k < n; ++k) v -= a[k * n + i] * b[k];
    b[i] = v / a[i * n + i];
  }
  return true;
}

SurrogateFit fit_l2(const AuxiliaryDataset& data, const SurrogateSettings& s) {
  const std::size_t m = data.size();
  const std::size_t d = data.feature_dim();
  const double inv_m = 1.0 / static_cast<double>(m);
  const SparseColumns cols = to_columns(data);
  const double y_mean = mean_of(data.targets());

  // Gram of the raw binary design, accumulated row by row over nonzeros.
  std::vector<double> gram(d * d, 0.0);
  std::vector<double> xty(d, 0.0);
  std::vector<std::size_t> nz;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& x = data.features(i).values;
    nz.clear();
    for (std::size_t j = 0; j < d; ++j) {
      if (x[j]) nz.push_back(j);
    }
    const double yc = data.target(i) - y_mean;
    for (std::size_t a : nz) {
      xty[a] += yc;
      for (std::size_t b : nz) gram[a * d + b] += 1.0;
    }
  }
  // Center: (1/m) Xc'Xc = (1/m) X'X - mu mu'. Xc'yc = X'yc since sum yc = 0.
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      gram[a * d + b] = gram[a * d + b] * inv_m - cols.mean[a] * cols.mean[b];
    }
    gram[a * d + a] += s.lambda;
    xty[a] *= inv_m;
  }
  if (!cholesky_solve(gram, xty, d)) {
    fail(ErrorCode::kRankDeficient, "regularized normal equations are singular; increase lambda");
  }

  SurrogateFit out;
  out.weights = std::move(xty);
  out.lambda = s.lambda;
  out.penalty = Penalty::kL2;
  double offset = 0.0;
  for (std::size_t j = 0; j < d; ++j) offset += cols.mean[j] * out.weights[j];
  out.intercept = y_mean - offset;
  out.objective_value = surrogate_objective(data, out.weights, out.intercept, s.lambda, Penalty::kL2);
  out.objective_trace = {out.objective_value};
  out.iterations_used = 1;
  out.converged = true;
  return out;
}

}  // namespace

std::string_view penalty_name(Penalty p) { return p == Penalty::kL1 ? "l1" : "l2"; }

Penalty parse_penalty(std::string_view name) {
  if (name == "l1") return Penalty::kL1;
  if (name == "l2") return Penalty::kL2;
  fail(ErrorCode::kInvalidArgument, "unknown penalty '" + std::string(name) + "'");
}

AuxiliaryDataset::AuxiliaryDataset(std::size_t feature_dim) : feature_dim_(feature_dim) {}

void AuxiliaryDataset::add(AdjacencyFeatureVector features, double target) {
  if (features.size() != feature_dim_) {
    fail(ErrorCode::kDimensionMismatch, "row has " + std::to_string(features.size()) +
                                            " features, dataset expects " + std::to_string(feature_dim_));
  }
  if (!std::isfinite(target)) fail(ErrorCode::kNonFinite, "target is not finite");
  features_.push_back(std::move(features));
  targets_.push_back(target);
}

void AuxiliaryDataset::reserve(std::size_t rows) {
  features_.reserve(rows);
  targets_.reserve(rows);
}

SurrogateFit fit(const AuxiliaryDataset& dataset, const SurrogateSettings& settings) {
  validate(dataset, settings);
  SurrogateFit out = settings.penalty == Penalty::kL1 ? fit_l1(dataset, settings) : fit_l2(dataset, settings);
  for (double w : out.weights) {
    if (!std::isfinite(w)) fail(ErrorCode::kNonFinite, "solver produced a non-finite weight");
  }
  if (!std::isfinite(out.objective_value) || !std::isfinite(out.intercept)) {
    fail(ErrorCode::kNonFinite, "solver produced a non-finite objective");
  }
  return out;
}

double predict(const SurrogateFit& fit, const AdjacencyFeatureVector& features) {
  if (features.size() != fit.weights.size()) fail(ErrorCode::kDimensionMismatch, "feature length mismatch");
  double s = fit.intercept;
  for (std::size_t j = 0; j < features.size(); ++j) {
    if (features.values[j]) s += fit.weights[j];
  }
  return s;
}

double predict(const SurrogateFit& fit, std::span<const double> features) {
  if (features.size() != fit.weights.size()) fail(ErrorCode::kDimensionMismatch, "feature length mismatch");
  double s = fit.intercept;
  for (std::size_t j = 0; j < features.size(); ++j) s += fit.weights[j] * features[j];
  return s;
}

double surrogate_objective(const AuxiliaryDataset& dataset, std::span<const double> weights, double intercept,
                           double lambda, Penalty penalty) {
  if (weights.size() != dataset.feature_dim()) fail(ErrorCode::kDimensionMismatch, "weight length mismatch");
  double sse = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    double pred = intercept;
    const auto& x = dataset.features(i).values;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j]) pred += weights[j];
    }
    const double r = dataset.target(i) - pred;
    sse += r * r;
  }
  return sse / static_cast<double>(dataset.size()) + lambda * penalty_value(weights, penalty);
}

double lambda_max(const AuxiliaryDataset& dataset) {
  if (dataset.empty()) fail(ErrorCode::kDegenerate, "dataset has no rows");
  const SparseColumns cols = to_columns(dataset);
  const double y_mean = mean_of(dataset.targets());
  const double inv_m = 1.0 / static_cast<double>(dataset.size());
  // Same arithmetic as the first coordinate-descent sweep from w = 0, so a
  // fit at exactly lambda_max leaves every weight at zero.
  std::vector<double> base(dataset.size());
  double sum_r = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    base[i] = dataset.target(i) - y_mean;
    sum_r += base[i];
  }
  double best = 0.0;
  for (std::size_t j = 0; j < cols.rows.size(); ++j) {
    double s = 0.0;
    for (auto i : cols.rows[j]) s += base[i];
    s -= cols.mean[j] * sum_r;
    best = std::max(best, std::abs(s * inv_m));
  }
  return 2.0 * best;
}

}  // namespace rle
