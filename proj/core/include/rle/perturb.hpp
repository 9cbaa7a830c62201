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

#ifndef RLE_PERTURB_HPP_
#define RLE_PERTURB_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "rle/decompose.hpp"

namespace rle {

// kReplacement draws every slot i.i.d. uniformly from the element set, so
// elements may repeat or go missing. kShuffle draws a uniform bijection.
enum class PermuteMode { kReplacement, kShuffle };

std::string_view permute_mode_name(PermuteMode mode);
PermuteMode parse_permute_mode(std::string_view name);

struct PermutedSample {
  Placement placement;
  std::uint64_t draw_index = 0;
};

// Deterministic in (seed, draw_index): the same pair always yields the same
// placement, independent of any other draws.
PermutedSample weak_permute(std::size_t element_count, std::uint64_t seed, std::uint64_t draw_index,
                            PermuteMode mode = PermuteMode::kReplacement);
PermutedSample weak_permute(const SampleDecomposition& decomp, std::uint64_t seed,
                            std::uint64_t draw_index, PermuteMode mode = PermuteMode::kReplacement);

// Sequential source of permutations; draw i of a Permuter seeded with s is
// weak_permute(n, s, i).
class Permuter {
 public:
  Permuter(std::size_t element_count, std::uint64_t seed, PermuteMode mode);

  PermutedSample next();
  std::uint64_t draws() const noexcept { return next_draw_; }

 private:
  std::size_t element_count_;
  std::uint64_t seed_;
  PermuteMode mode_;
  std::uint64_t next_draw_ = 0;
};

// Strict lower-triangle index of the unordered pair {u, v}, u != v:
// (1,0)->0, (2,0)->1, (2,1)->2, (3,0)->3, ...
constexpr std::size_t pair_index(std::size_t u, std::size_t v) noexcept {
  if (u < v) std::swap(u, v);
  return u * (u - 1) / 2 + v;
}
// Inverse of pair_index; returns (row, col) with row > col.
std::pair<std::size_t, std::size_t> pair_from_index(std::size_t k) noexcept;

constexpr std::size_t pair_count(std::size_t n) noexcept { return n * (n - 1) / 2; }

// Binary, strict lower-triangle flattening of an element adjacency matrix.
struct AdjacencyFeatureVector {
  std::vector<std::uint8_t> values;

  std::size_t size() const noexcept { return values.size(); }
  friend bool operator==(const AdjacencyFeatureVector&, const AdjacencyFeatureVector&) = default;
};

class ElementAdjacencyMatrix {
 public:
  explicit ElementAdjacencyMatrix(std::size_t n);
  ElementAdjacencyMatrix(std::size_t n, std::vector<std::uint8_t> entries);

  std::size_t size() const noexcept { return n_; }
  std::uint8_t at(std::size_t u, std::size_t v) const noexcept { return entries_[u * n_ + v]; }
  std::span<const std::uint8_t> entries() const noexcept { return entries_; }

  // Sets both (u,v) and (v,u); u == v is ignored.
  void connect(std::size_t u, std::size_t v) noexcept;

  bool is_symmetric() const noexcept;
  bool has_zero_diagonal() const noexcept;

  static ElementAdjacencyMatrix from_features(std::size_t n, const AdjacencyFeatureVector& features);

 private:
  std::size_t n_;
  std::vector<std::uint8_t> entries_;
};

ElementAdjacencyMatrix build_adjacency(const SlotLayout& layout, std::size_t element_count,
                                       std::span<const std::size_t> placement);
ElementAdjacencyMatrix build_adjacency(const SampleDecomposition& decomp, const PermutedSample& perm);

// Throws kAsymmetricInput unless the matrix is symmetric with zero diagonal.
AdjacencyFeatureVector lower_triangle(const ElementAdjacencyMatrix& adj);

// Fused build_adjacency + lower_triangle for the hot loop.
AdjacencyFeatureVector adjacency_features(const SlotLayout& layout, std::size_t element_count,
                                          std::span<const std::size_t> placement);

}  // namespace rle

#endif  // RLE_PERTURB_HPP_
