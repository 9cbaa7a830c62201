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

#ifndef RLE_DECOMPOSE_HPP_
#define RLE_DECOMPOSE_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rle/image.hpp"

namespace rle {

enum class Modality { kImage, kText };

std::string_view modality_name(Modality m);

// A rectangular block of the source image. Pixels are row-major RGB8,
// width * height * 3 bytes.
struct ImagePatch {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;
};

struct Token {
  std::string text;
};

using Element = std::variant<ImagePatch, Token>;

// Unordered slot pair, stored with first < second.
struct SlotEdge {
  std::size_t first = 0;
  std::size_t second = 0;

  friend bool operator==(const SlotEdge&, const SlotEdge&) = default;
};

class SlotLayout {
 public:
  SlotLayout(std::size_t slot_count, std::vector<SlotEdge> edges);

  // 4-neighborhood of a side x side grid, slots in row-major order.
  static SlotLayout grid(std::size_t side);
  // Path 0-1-2-...-(n-1).
  static SlotLayout chain(std::size_t n);

  std::size_t slot_count() const noexcept { return slot_count_; }
  std::span<const SlotEdge> edges() const noexcept { return edges_; }

 private:
  std::size_t slot_count_;
  std::vector<SlotEdge> edges_;
};

struct ImageGeometry {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t grid_side = 0;
  std::size_t patch_width = 0;
  std::size_t patch_height = 0;
};

// Assignment of one element index to each slot. Duplicates are allowed.
using Placement = std::vector<std::size_t>;
inline constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

Placement identity_placement(std::size_t n);

// A raw model input: either an image or a sentence.
using RawInput = std::variant<ImageBuffer, std::string>;

class SampleDecomposition {
 public:
  SampleDecomposition(Modality modality, std::vector<Element> elements,
                      std::shared_ptr<const SlotLayout> layout,
                      std::optional<ImageGeometry> geometry = std::nullopt);

  Modality modality() const noexcept { return modality_; }
  std::size_t size() const noexcept { return elements_.size(); }
  std::span<const Element> elements() const noexcept { return elements_; }
  const SlotLayout& layout() const noexcept { return *layout_; }
  const std::shared_ptr<const SlotLayout>& shared_layout() const noexcept { return layout_; }
  // Present for image modality only.
  const std::optional<ImageGeometry>& geometry() const noexcept { return geometry_; }

  const ImagePatch& patch(std::size_t i) const { return std::get<ImagePatch>(elements_.at(i)); }
  const Token& token(std::size_t i) const { return std::get<Token>(elements_.at(i)); }

 private:
  Modality modality_;
  std::vector<Element> elements_;
  std::shared_ptr<const SlotLayout> layout_;
  std::optional<ImageGeometry> geometry_;
};

// Splits the image into grid_side x grid_side equal patches, row-major.
SampleDecomposition partition_image(const ImageBuffer& image, std::size_t grid_side);

// One element per whitespace-separated token; punctuation stays attached.
SampleDecomposition tokenize_text(std::string_view sentence);

ImageBuffer reassemble_image(const SampleDecomposition& decomp, std::span<const std::size_t> placement);
std::string reassemble_text(const SampleDecomposition& decomp, std::span<const std::size_t> placement);
RawInput reassemble(const SampleDecomposition& decomp, std::span<const std::size_t> placement);

}  // namespace rle

#endif  // RLE_DECOMPOSE_HPP_
