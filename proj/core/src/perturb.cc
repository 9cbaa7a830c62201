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

#include "rle/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rle/errors.hpp"

namespace rle {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 draw_engine(std::uint64_t seed, std::uint64_t draw_index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(draw_index + 0x5851f42d4c957f2dULL)));
}

void check_element_index(std::size_t n, std::size_t u) {
  if (u >= n) fail(ErrorCode::kInvalidArgument, "element index " + std::to_string(u) + " out of range");
}

}  // namespace

std::string_view permute_mode_name(PermuteMode mode) {
  return mode == PermuteMode::kReplacement ? "replacement" : "shuffle";
}

PermuteMode parse_permute_mode(std::string_view name) {
  if (name == "replacement") return PermuteMode::kReplacement;
  if (name == "shuffle") return PermuteMode::kShuffle;
  fail(ErrorCode::kInvalidArgument, "unknown permute mode '" + std::string(name) + "'");
}

PermutedSample weak_permute(std::size_t element_count, std::uint64_t seed, std::uint64_t draw_index,
                            PermuteMode mode) {
  if (element_count < 2) fail(ErrorCode::kTooSmall, "need at least 2 elements to permute");
  auto engine = draw_engine(seed, draw_index);
  PermutedSample out;
  out.draw_index = draw_index;
  if (mode == PermuteMode::kShuffle) {
    out.placement = identity_placement(element_count);
    std::shuffle(out.placement.begin(), out.placement.end(), engine);
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, element_count - 1);
    out.placement.resize(element_count);
    for (auto& slot : out.placement) slot = pick(engine);
  }
  return out;
}

PermutedSample weak_permute(const SampleDecomposition& decomp, std::uint64_t seed, std::uint64_t draw_index,
                            PermuteMode mode) {
  return weak_permute(decomp.size(), seed, draw_index, mode);
}

Permuter::Permuter(std::size_t element_count, std::uint64_t seed, PermuteMode mode)
    : element_count_(element_count), seed_(seed), mode_(mode) {
  if (element_count_ < 2) fail(ErrorCode::kTooSmall, "need at least 2 elements to permute");
}

PermutedSample Permuter::next() { return weak_permute(element_count_, seed_, next_draw_++, mode_); }

std::pair<std::size_t, std::size_t> pair_from_index(std::size_t k) noexcept {
  // Largest u with u(u-1)/2 <= k.
  auto u = static_cast<std::size_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 2.0);
  while (u * (u - 1) / 2 > k) --u;
  while ((u + 1) * u / 2 <= k) ++u;
  return {u, k - u * (u - 1) / 2};
}

ElementAdjacencyMatrix::ElementAdjacencyMatrix(std::size_t n) : n_(n), entries_(n * n, 0) {}

ElementAdjacencyMatrix::ElementAdjacencyMatrix(std::size_t n, std::vector<std::uint8_t> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_) fail(ErrorCode::kDimensionMismatch, "adjacency entries must be n*n");
  for (auto e : entries_) {
    if (e > 1) fail(ErrorCode::kInvalidArgument, "adjacency entries must be 0 or 1");
  }
}

void ElementAdjacencyMatrix::connect(std::size_t u, std::size_t v) noexcept {
  if (u == v) return;
  entries_[u * n_ + v] = 1;
  entries_[v * n_ + u] = 1;
}

bool ElementAdjacencyMatrix::is_symmetric() const noexcept {
  for (std::size_t u = 0; u < n_; ++u) {
    for (std::size_t v = 0; v < u; ++v) {
      if (at(u, v) != at(v, u)) return false;
    }
  }
  return true;
}

bool ElementAdjacencyMatrix::has_zero_diagonal() const noexcept {
  for (std::size_t u = 0; u < n_; ++u) {
    if (at(u, u) != 0) return false;
  }
  return true;
}

ElementAdjacencyMatrix ElementAdjacencyMatrix::from_features(std::size_t n,
                                                             const AdjacencyFeatureVector& features) {
  if (features.size() != pair_count(n)) {
    fail(ErrorCode::kDimensionMismatch, "feature vector length does not match n(n-1)/2");
  }
  ElementAdjacencyMatrix m(n);
  for (std::size_t u = 1; u < n; ++u) {
    for (std::size_t v = 0; v < u; ++v) {
      if (features.values[pair_index(u, v)]) m.connect(u, v);
    }
  }
  return m;
}

ElementAdjacencyMatrix build_adjacency(const SlotLayout& layout, std::size_t element_count,
                                       std::span<const std::size_t> placement) {
  if (placement.size() != layout.slot_count()) {
    fail(ErrorCode::kIncompletePlacement, "placement does not cover every slot");
  }
  ElementAdjacencyMatrix m(element_count);
  for (const SlotEdge& e : layout.edges()) {
    const std::size_t u = placement[e.first];
    const std::size_t v = placement[e.second];
    check_element_index(element_count, u);
    check_element_index(element_count, v);
    m.connect(u, v);
  }
  return m;
}

ElementAdjacencyMatrix build_adjacency(const SampleDecomposition& decomp, const PermutedSample& perm) {
  return build_adjacency(decomp.layout(), decomp.size(), perm.placement);
}

AdjacencyFeatureVector lower_triangle(const ElementAdjacencyMatrix& adj) {
  if (!adj.is_symmetric()) fail(ErrorCode::kAsymmetricInput, "adjacency matrix is not symmetric");
  if (!adj.has_zero_diagonal()) fail(ErrorCode::kAsymmetricInput, "adjacency matrix has a nonzero diagonal");
  const std::size_t n = adj.size();
  AdjacencyFeatureVector out;
  out.values.reserve(pair_count(n));
  for (std::size_t u = 1; u < n; ++u) {
    for (std::size_t v = 0; v < u; ++v) out.values.push_back(adj.at(u, v));
  }
  return out;
}

AdjacencyFeatureVector adjacency_features(const SlotLayout& layout, std::size_t element_count,
                                          std::span<const std::size_t> placement) {
  if (placement.size() != layout.slot_count()) {
    fail(ErrorCode::kIncompletePlacement, "placement does not cover every slot");
  }
  AdjacencyFeatureVector out;
  out.values.assign(pair_count(element_count), 0);
  for (const SlotEdge& e : layout.edges()) {
    const std::size_t u = placement[e.first];
    const std::size_t v = placement[e.second];
    check_element_index(element_count, u);
    check_element_index(element_count, v);
    if (u != v) out.values[pair_index(u, v)] = 1;
  }
  return out;
}

}  // namespace rle
