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

#include "rle/decompose.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <numeric>

#include "rle/errors.hpp"

namespace rle {

std::string_view modality_name(Modality m) { return m == Modality::kImage ? "image" : "text"; }

SlotLayout::SlotLayout(std::size_t slot_count, std::vector<SlotEdge> edges)
    : slot_count_(slot_count), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.first > e.second) std::swap(e.first, e.second);
    if (e.first == e.second || e.second >= slot_count_) {
      fail(ErrorCode::kInvalidArgument, "layout edge references an invalid slot pair");
    }
  }
  std::sort(edges_.begin(), edges_.end(), [](const SlotEdge& a, const SlotEdge& b) {
    return a.first != b.first ? a.first < b.first : a.second < b.second;
  });
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    fail(ErrorCode::kInvalidArgument, "layout contains a duplicate edge");
  }
}

SlotLayout SlotLayout::grid(std::size_t side) {
  std::vector<SlotEdge> edges;
  edges.reserve(side > 0 ? 2 * side * (side - 1) : 0);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      const std::size_t s = r * side + c;
      if (c + 1 < side) edges.push_back({s, s + 1});
      if (r + 1 < side) edges.push_back({s, s + side});
    }
  }
  return SlotLayout(side * side, std::move(edges));
}

SlotLayout SlotLayout::chain(std::size_t n) {
  std::vector<SlotEdge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return SlotLayout(n, std::move(edges));
}

Placement identity_placement(std::size_t n) {
  Placement p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return p;
}

SampleDecomposition::SampleDecomposition(Modality modality, std::vector<Element> elements,
                                         std::shared_ptr<const SlotLayout> layout,
                                         std::optional<ImageGeometry> geometry)
    : modality_(modality),
      elements_(std::move(elements)),
      layout_(std::move(layout)),
      geometry_(geometry) {
  if (elements_.size() < 2) fail(ErrorCode::kTooSmall, "a decomposition needs at least 2 elements");
  if (!layout_ || layout_->slot_count() != elements_.size()) {
    fail(ErrorCode::kInvalidArgument, "layout slot count must equal element count");
  }
  if (modality_ == Modality::kImage) {
    if (!geometry_) fail(ErrorCode::kInvalidArgument, "image decomposition requires geometry");
    if (geometry_->grid_side * geometry_->grid_side != elements_.size()) {
      fail(ErrorCode::kInvalidArgument, "image element count must be grid_side^2");
    }
  }
}

SampleDecomposition partition_image(const ImageBuffer& image, std::size_t grid_side) {
  if (grid_side < 2) fail(ErrorCode::kTooSmall, "grid_side must be at least 2");
  if (image.width() % grid_side != 0 || image.height() % grid_side != 0) {
    fail(ErrorCode::kDimensionNotDivisible,
         std::to_string(image.width()) + "x" + std::to_string(image.height()) +
             " is not divisible by grid_side " + std::to_string(grid_side));
  }
  const ImageGeometry geo{image.width(), image.height(), grid_side, image.width() / grid_side,
                          image.height() / grid_side};
  const std::size_t row_bytes = geo.patch_width * ImageBuffer::kChannels;
  const auto src = image.pixels();

  std::vector<Element> elements;
  elements.reserve(grid_side * grid_side);
  for (std::size_t r = 0; r < grid_side; ++r) {
    for (std::size_t c = 0; c < grid_side; ++c) {
      ImagePatch p;
      p.row = r;
      p.col = c;
      p.x = c * geo.patch_width;
      p.y = r * geo.patch_height;
      p.width = geo.patch_width;
      p.height = geo.patch_height;
      p.pixels.resize(row_bytes * geo.patch_height);
      for (std::size_t y = 0; y < geo.patch_height; ++y) {
        const std::size_t off = ((p.y + y) * image.width() + p.x) * ImageBuffer::kChannels;
        std::memcpy(p.pixels.data() + y * row_bytes, src.data() + off, row_bytes);
      }
      elements.emplace_back(std::move(p));
    }
  }
  return SampleDecomposition(Modality::kImage, std::move(elements),
                             std::make_shared<const SlotLayout>(SlotLayout::grid(grid_side)), geo);
}

SampleDecomposition tokenize_text(std::string_view sentence) {
  std::vector<Element> elements;
  std::size_t i = 0;
  auto is_space = [](char ch) { return std::isspace(static_cast<unsigned char>(ch)) != 0; };
  while (i < sentence.size()) {
    while (i < sentence.size() && is_space(sentence[i])) ++i;
    const std::size_t start = i;
    while (i < sentence.size() && !is_space(sentence[i])) ++i;
    if (i > start) elements.emplace_back(Token{std::string(sentence.substr(start, i - start))});
  }
  if (elements.size() < 2) {
    fail(ErrorCode::kTooFewTokens,
         "sentence has " + std::to_string(elements.size()) + " token(s), need at least 2");
  }
  const std::size_t n = elements.size();
  return SampleDecomposition(Modality::kText, std::move(elements),
                             std::make_shared<const SlotLayout>(SlotLayout::chain(n)));
}

namespace {

void check_placement(const SampleDecomposition& decomp, std::span<const std::size_t> placement) {
  if (placement.size() != decomp.layout().slot_count()) {
    fail(ErrorCode::kIncompletePlacement, "placement covers " + std::to_string(placement.size()) +
                                              " of " + std::to_string(decomp.layout().slot_count()) +
                                              " slots");
  }
  for (std::size_t s = 0; s < placement.size(); ++s) {
    if (placement[s] == kUnassigned) {
      fail(ErrorCode::kIncompletePlacement, "slot " + std::to_string(s) + " is unassigned");
    }
    if (placement[s] >= decomp.size()) {
      fail(ErrorCode::kInvalidArgument, "slot " + std::to_string(s) + " references element " +
                                            std::to_string(placement[s]) + " out of range");
    }
  }
}

}  // namespace

ImageBuffer reassemble_image(const SampleDecomposition& decomp, std::span<const std::size_t> placement) {
  if (decomp.modality() != Modality::kImage) fail(ErrorCode::kModalityMismatch, "not an image decomposition");
  check_placement(decomp, placement);
  const ImageGeometry& geo = *decomp.geometry();
  ImageBuffer out(geo.width, geo.height);
  auto dst = out.mutable_pixels();
  const std::size_t row_bytes = geo.patch_width * ImageBuffer::kChannels;
  for (std::size_t s = 0; s < placement.size(); ++s) {
    const ImagePatch& src = decomp.patch(placement[s]);
    const std::size_t sx = (s % geo.grid_side) * geo.patch_width;
    const std::size_t sy = (s / geo.grid_side) * geo.patch_height;
    for (std::size_t y = 0; y < geo.patch_height; ++y) {
      std::memcpy(dst.data() + ((sy + y) * geo.width + sx) * ImageBuffer::kChannels,
                  src.pixels.data() + y * row_bytes, row_bytes);
    }
  }
  return out;
}

std::string reassemble_text(const SampleDecomposition& decomp, std::span<const std::size_t> placement) {
  if (decomp.modality() != Modality::kText) fail(ErrorCode::kModalityMismatch, "not a text decomposition");
  check_placement(decomp, placement);
  std::string out;
  for (std::size_t s = 0; s < placement.size(); ++s) {
    if (s > 0) out.push_back(' ');
    out += decomp.token(placement[s]).text;
  }
  return out;
}

RawInput reassemble(const SampleDecomposition& decomp, std::span<const std::size_t> placement) {
  if (decomp.modality() == Modality::kImage) return reassemble_image(decomp, placement);
  return reassemble_text(decomp, placement);
}

}  // namespace rle
