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

#ifndef RLE_EXPLAIN_HPP_
#define RLE_EXPLAIN_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rle/decompose.hpp"
#include "rle/models.hpp"
#include "rle/perturb.hpp"
#include "rle/surrogate.hpp"

namespace rle {

inline constexpr std::size_t kDefaultImagePermutations = 5000;
inline constexpr std::size_t kDefaultTextPermutations = 2000;

struct ExplainSettings {
  // nullopt means "auto": 5000 for images, 2000 for text.
  std::optional<std::size_t> permutations;
  std::uint64_t seed = 0;
  PermuteMode permute_mode = PermuteMode::kReplacement;
  SurrogateSettings surrogate;
  std::size_t target_class = 0;
};

std::size_t resolve_permutations(Modality modality, std::optional<std::size_t> requested);

// Symmetric n x n matrix of pairwise relation weights with zero diagonal.
class RelationalExplanation {
 public:
  // Scatters strict-lower-triangle pair weights into both (u,v) and (v,u).
  static RelationalExplanation from_pair_weights(std::size_t n, std::span<const double> pair_weights);

  std::size_t size() const noexcept { return n_; }
  double at(std::size_t u, std::size_t v) const noexcept { return matrix_[u * n_ + v]; }
  std::span<const double> matrix() const noexcept { return matrix_; }

  std::size_t target_class = 0;
  std::size_t permutations_used = 0;
  // f(x0) on the unpermuted input; reported, never used as a training row.
  std::optional<double> original_score;
  std::shared_ptr<const SurrogateFit> surrogate;

 private:
  RelationalExplanation(std::size_t n, std::vector<double> matrix);

  std::size_t n_;
  std::vector<double> matrix_;
};

struct LocalExplanation {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
};

// Runs the full loop on an already decomposed sample: m draws of
// {weak_permute, reassemble, score, adjacency features}, then the surrogate
// fit, then the symmetric scatter of its weights.
RelationalExplanation explain(Model& model, const SampleDecomposition& decomp, const ExplainSettings& settings);

// Decomposes the raw input first (grid_side is used for images only).
RelationalExplanation explain(Model& model, const RawInput& input, std::size_t grid_side,
                              const ExplainSettings& settings);

// values[u] = mean over v != u of A[u][v].
LocalExplanation to_local(const RelationalExplanation& rel);

struct RankedPair {
  std::size_t u = 0;  // u > v
  std::size_t v = 0;
  double weight = 0.0;
};

// Pairs sorted by |weight| descending, ties by (u, v) ascending.
std::vector<RankedPair> top_pairs(const RelationalExplanation& rel, std::size_t k);

}  // namespace rle

#endif  // RLE_EXPLAIN_HPP_
