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

#include "rle/explain.hpp"

#include <algorithm>
#include <cmath>

#include "rle/errors.hpp"

namespace rle {

std::size_t resolve_permutations(Modality modality, std::optional<std::size_t> requested) {
  if (requested) return *requested;
  return modality == Modality::kImage ? kDefaultImagePermutations : kDefaultTextPermutations;
}

RelationalExplanation::RelationalExplanation(std::size_t n, std::vector<double> matrix)
    : n_(n), matrix_(std::move(matrix)) {}

RelationalExplanation RelationalExplanation::from_pair_weights(std::size_t n, std::span<const double> pair_weights) {
  if (n < 2) fail(ErrorCode::kTooSmall, "an explanation needs at least 2 elements");
  if (pair_weights.size() != pair_count(n)) {
    fail(ErrorCode::kDimensionMismatch, "expected " + std::to_string(pair_count(n)) + " pair weights, got " +
                                            std::to_string(pair_weights.size()));
  }
  std::vector<double> m(n * n, 0.0);
  for (std::size_t u = 1; u < n; ++u) {
    for (std::size_t v = 0; v < u; ++v) {
      const double w = pair_weights[pair_index(u, v)];
      if (!std::isfinite(w)) fail(ErrorCode::kNonFinite, "pair weight is not finite");
      m[u * n + v] = w;
      m[v * n + u] = w;
    }
  }
  return RelationalExplanation(n, std::move(m));
}

RelationalExplanation explain(Model& model, const SampleDecomposition& decomp, const ExplainSettings& settings) {
  const std::size_t m = resolve_permutations(decomp.modality(), settings.permutations);
  if (m < 1) fail(ErrorCode::kInsufficientPermutations, "need at least one permutation");
  const std::size_t n = decomp.size();
  const auto& layout = decomp.shared_layout();

  // The unpermuted input is scored once for reporting.
  ModelInput original{reassemble(decomp, identity_placement(n)), identity_placement(n), layout};
  const double original_score = score_batch(model, std::span(&original, 1), settings.target_class).front();

  AuxiliaryDataset data(pair_count(n));
  data.reserve(m);
  Permuter permuter(n, settings.seed, settings.permute_mode);
  const std::size_t chunk = std::max<std::size_t>(1, model.batch_size());
  std::vector<ModelInput> batch;
  std::vector<AdjacencyFeatureVector> features;
  batch.reserve(chunk);
  features.reserve(chunk);
  for (std::size_t done = 0; done < m;) {
    const std::size_t count = std::min(chunk, m - done);
    batch.clear();
    features.clear();
    for (std::size_t i = 0; i < count; ++i) {
      PermutedSample p = permuter.next();
      features.push_back(adjacency_features(*layout, n, p.placement));
      RawInput raw = reassemble(decomp, p.placement);
      batch.push_back(ModelInput{std::move(raw), std::move(p.placement), layout});
    }
    const auto scores = score_batch(model, batch, settings.target_class);
    for (std::size_t i = 0; i < count; ++i) data.add(std::move(features[i]), scores[i]);
    done += count;
  }

  auto surrogate = std::make_shared<const SurrogateFit>(fit(data, settings.surrogate));
  RelationalExplanation rel = RelationalExplanation::from_pair_weights(n, surrogate->weights);
  rel.target_class = settings.target_class;
  rel.permutations_used = m;
  rel.original_score = original_score;
  rel.surrogate = std::move(surrogate);
  return rel;
}

RelationalExplanation explain(Model& model, const RawInput& input, std::size_t grid_side,
                              const ExplainSettings& settings) {
  if (const auto* img = std::get_if<ImageBuffer>(&input)) {
    return explain(model, partition_image(*img, grid_side), settings);
  }
  return explain(model, tokenize_text(std::get<std::string>(input)), settings);
}

LocalExplanation to_local(const RelationalExplanation& rel) {
  const std::size_t n = rel.size();
  LocalExplanation out;
  out.values.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    double s = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (v != u) s += rel.at(u, v);
    }
    out.values[u] = s / static_cast<double>(n - 1);
  }
  return out;
}

std::vector<RankedPair> top_pairs(const RelationalExplanation& rel, std::size_t k) {
  const std::size_t n = rel.size();
  if (k < 1 || k > pair_count(n)) {
    fail(ErrorCode::kKOutOfRange, "k must be in [1, " + std::to_string(pair_count(n)) + "], got " + std::to_string(k));
  }
  std::vector<RankedPair> pairs;
  pairs.reserve(pair_count(n));
  for (std::size_t u = 1; u < n; ++u) {
    for (std::size_t v = 0; v < u; ++v) pairs.push_back({u, v, rel.at(u, v)});
  }
  auto before = [](const RankedPair& a, const RankedPair& b) {
    const double wa = std::abs(a.weight);
    const double wb = std::abs(b.weight);
    if (wa != wb) return wa > wb;
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  };
  std::partial_sort(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(k), pairs.end(), before);
  pairs.resize(k);
  return pairs;
}

}  // namespace rle
