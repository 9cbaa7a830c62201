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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "rle/errors.hpp"
#include "test_support.hpp"

namespace rle {
namespace {

using testing::random_image_avoiding_mean;

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected rle::Error";
  return ErrorCode::kInvalidArgument;
}

std::set<std::pair<std::size_t, std::size_t>> edge_set(const SlotLayout& layout) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (const auto& e : layout.edges()) out.insert({e.first, e.second});
  return out;
}

TEST(PartitionImage, SevenBySevenOf224) {
  const ImageBuffer img(224, 224);
  const auto d = partition_image(img, 7);
  EXPECT_EQ(d.modality(), Modality::kImage);
  ASSERT_EQ(d.size(), 49u);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(d.patch(i).width, 32u);
    EXPECT_EQ(d.patch(i).height, 32u);
    EXPECT_EQ(d.patch(i).pixels.size(), 32u * 32u * 3u);
  }
}

TEST(PartitionImage, TwoByTwoAdjacency) {
  const auto d = partition_image(ImageBuffer(4, 4), 2);
  const std::set<std::pair<std::size_t, std::size_t>> expected = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  EXPECT_EQ(edge_set(d.layout()), expected);
}

TEST(PartitionImage, GridEdgeCount) {
  for (std::size_t side = 2; side <= 9; ++side) {
    EXPECT_EQ(SlotLayout::grid(side).edges().size(), 2 * side * (side - 1)) << side;
  }
  EXPECT_EQ(SlotLayout::grid(3).edges().size(), 12u);
}

TEST(PartitionImage, RowMajorPatchOrigins) {
  const auto d = partition_image(ImageBuffer(30, 12), 3);
  EXPECT_EQ(d.patch(5).row, 1u);
  EXPECT_EQ(d.patch(5).col, 2u);
  EXPECT_EQ(d.patch(5).x, 20u);
  EXPECT_EQ(d.patch(5).y, 4u);
  EXPECT_EQ(d.patch(5).width, 10u);
  EXPECT_EQ(d.patch(5).height, 4u);
}

TEST(PartitionImage, Errors) {
  EXPECT_EQ(code_of([] { partition_image(ImageBuffer(10, 10), 1); }), ErrorCode::kTooSmall);
  EXPECT_EQ(code_of([] { partition_image(ImageBuffer(10, 10), 3); }), ErrorCode::kDimensionNotDivisible);
  EXPECT_EQ(code_of([] { partition_image(ImageBuffer(12, 10), 4); }), ErrorCode::kDimensionNotDivisible);
}

TEST(PartitionImage, RoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t k = 2 + seed % 5;
    const ImageBuffer img = random_image_avoiding_mean(k * (3 + seed % 4), k * (2 + seed % 3), seed);
    const auto d = partition_image(img, k);
    EXPECT_EQ(reassemble_image(d, identity_placement(d.size())), img);
  }
}

TEST(ImageBuffer, RejectsBadShapes) {
  EXPECT_EQ(code_of([] { ImageBuffer(0, 3); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { ImageBuffer(2, 2, std::vector<std::uint8_t>(11)); }), ErrorCode::kDimensionMismatch);
}

TEST(TokenizeText, ChainLayout) {
  const auto d = tokenize_text("I love you");
  EXPECT_EQ(d.modality(), Modality::kText);
  ASSERT_EQ(d.size(), 3u);
  const std::set<std::pair<std::size_t, std::size_t>> expected = {{0, 1}, {1, 2}};
  EXPECT_EQ(edge_set(d.layout()), expected);
}

TEST(TokenizeText, NineTokenSentence) {
  const auto d = tokenize_text("you gonna suffer but you'll be happy about it");
  EXPECT_EQ(d.size(), 9u);
  EXPECT_EQ(d.layout().edges().size(), 8u);
  EXPECT_EQ(d.token(4).text, "you'll");
}

TEST(TokenizeText, PunctuationStaysAttached) {
  const auto d = tokenize_text("  well,   presented!\tthing\n");
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d.token(0).text, "well,");
  EXPECT_EQ(d.token(1).text, "presented!");
}

TEST(TokenizeText, TooFewTokens) {
  EXPECT_EQ(code_of([] { tokenize_text("hi"); }), ErrorCode::kTooFewTokens);
  EXPECT_EQ(code_of([] { tokenize_text("   "); }), ErrorCode::kTooFewTokens);
}

TEST(TokenizeText, PathInvariant) {
  const auto d = tokenize_text("a b c d e f g");
  std::vector<int> degree(d.size());
  for (const auto& e : d.layout().edges()) {
    ++degree[e.first];
    ++degree[e.second];
  }
  EXPECT_EQ(d.layout().edges().size(), d.size() - 1);
  for (std::size_t i = 1; i + 1 < d.size(); ++i) EXPECT_EQ(degree[i], 2);
  EXPECT_EQ(degree.front(), 1);
  EXPECT_EQ(degree.back(), 1);
}

TEST(Reassemble, Text) {
  const auto d = tokenize_text("I  love\tyou");
  EXPECT_EQ(reassemble_text(d, identity_placement(3)), "I love you");
  const Placement rev = {2, 1, 0};
  EXPECT_EQ(reassemble_text(d, rev), "you love I");
  const Placement dup = {0, 0, 2};
  EXPECT_EQ(reassemble_text(d, dup), "I I you");
  EXPECT_EQ(std::get<std::string>(reassemble(d, dup)), "I I you");
}

TEST(Reassemble, ImageMovesPatches) {
  ImageBuffer img(4, 2);
  img.set(0, 0, {1, 1, 1});
  img.set(3, 1, {9, 9, 9});
  const auto d = partition_image(img, 2);
  const Placement swap = {3, 3, 0, 0};
  const ImageBuffer out = reassemble_image(d, swap);
  EXPECT_EQ(out.at(1, 0), (Rgb{9, 9, 9}));
  EXPECT_EQ(out.at(3, 0), (Rgb{9, 9, 9}));
  EXPECT_EQ(out.at(0, 1), (Rgb{1, 1, 1}));
}

TEST(Reassemble, Errors) {
  const auto d = tokenize_text("a b c");
  const Placement short_p = {0, 1};
  const Placement hole = {0, kUnassigned, 1};
  const Placement out_of_range = {0, 1, 3};
  EXPECT_EQ(code_of([&] { reassemble(d, short_p); }), ErrorCode::kIncompletePlacement);
  EXPECT_EQ(code_of([&] { reassemble(d, hole); }), ErrorCode::kIncompletePlacement);
  EXPECT_EQ(code_of([&] { reassemble(d, out_of_range); }), ErrorCode::kInvalidArgument);
}

TEST(SlotLayout, ValidatesEdges) {
  EXPECT_EQ(code_of([] { SlotLayout(3, {{0, 3}}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { SlotLayout(3, {{1, 1}}); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace rle
