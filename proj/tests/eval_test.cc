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

#include "rle/eval.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <array>

#include "rle/errors.hpp"
#include "rle/synthetic.hpp"
#include "test_support.hpp"

namespace rle {
namespace {

using testing::SurvivingFractionModel;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected rle::Error";
  return ErrorCode::kInvalidArgument;
}

std::vector<std::size_t> segment_sizes(const Segmentation& seg) {
  std::vector<std::size_t> sizes(seg.segment_count, 0);
  for (auto l : seg.labels) ++sizes.at(static_cast<std::size_t>(l));
  return sizes;
}

// Random field smoothed by a (2r+1)^2 box filter: texture without the
// per-pixel noise that no superpixel method is meant to handle.
ImageBuffer smooth_noise(std::size_t w, std::size_t h, int r, std::uint64_t seed) {
  const auto raw = testing::random_image_avoiding_mean(w, h, seed);
  ImageBuffer out(w, h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      int sum[3] = {0, 0, 0};
      int count = 0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const long xx = static_cast<long>(x) + dx;
          const long yy = static_cast<long>(y) + dy;
          if (xx < 0 || yy < 0 || xx >= static_cast<long>(w) || yy >= static_cast<long>(h)) continue;
          const Rgb p = raw.at(static_cast<std::size_t>(xx), static_cast<std::size_t>(yy));
          sum[0] += p.r;
          sum[1] += p.g;
          sum[2] += p.b;
          ++count;
        }
      }
      out.set(x, y, {static_cast<std::uint8_t>(sum[0] / count), static_cast<std::uint8_t>(sum[1] / count),
                     static_cast<std::uint8_t>(sum[2] / count)});
    }
  }
  return out;
}

ImageBuffer gradient_image(std::size_t w, std::size_t h) {
  ImageBuffer img(w, h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      img.set(x, y, {static_cast<std::uint8_t>(x * 255 / w), static_cast<std::uint8_t>(y * 255 / h),
                     static_cast<std::uint8_t>((x + y) % 256)});
    }
  }
  return img;
}

TEST(Slic, UniformImageSplitsEvenly) {
  const auto seg = slic_segment(testing::solid_image(64, 64, {90, 120, 200}), {.k = 4});
  ASSERT_EQ(seg.segment_count, 4u);
  EXPECT_EQ(segment_sizes(seg), (std::vector<std::size_t>{1024, 1024, 1024, 1024}));
  EXPECT_TRUE(is_valid_segmentation(seg));
}

TEST(Slic, TwoToneBoundaryMatchesColorBoundary) {
  ImageBuffer img(64, 64);
  for (std::size_t y = 0; y < 64; ++y) {
    for (std::size_t x = 0; x < 64; ++x) img.set(x, y, x < 32 ? Rgb{220, 30, 30} : Rgb{30, 30, 220});
  }
  const auto seg = slic_segment(img, {.k = 2});
  ASSERT_EQ(seg.segment_count, 2u);
  // Brute-force majority: each segment's majority side must claim every one
  // of its pixels, and the two segments must take opposite sides.
  std::map<int, std::array<std::size_t, 2>> votes;
  for (std::size_t y = 0; y < 64; ++y) {
    for (std::size_t x = 0; x < 64; ++x) ++votes[seg.at(x, y)][x < 32 ? 0 : 1];
  }
  std::set<int> sides;
  for (const auto& [label, v] : votes) {
    EXPECT_TRUE(v[0] == 0 || v[1] == 0) << "segment " << label << " straddles the boundary";
    sides.insert(v[0] > v[1] ? 0 : 1);
  }
  EXPECT_EQ(sides.size(), 2u);
}

TEST(Slic, SegmentCountWithinFactorOfTwo) {
  std::vector<ImageBuffer> corpus;
  corpus.push_back(gradient_image(96, 64));
  corpus.push_back(smooth_noise(80, 80, 4, 3));
  corpus.push_back(smooth_noise(120, 90, 8, 4));
  corpus.push_back(make_patch_image(3, 24, 5).image);
  corpus.push_back(make_patch_image(7, 8, 6).image);
  corpus.push_back(testing::solid_image(50, 70, {10, 10, 10}));
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t k : {4, 10, 25, 50, 100}) {
      const auto seg = slic_segment(corpus[i], {.k = k});
      EXPECT_GE(seg.segment_count * 2, k) << "image " << i << " k " << k;
      EXPECT_LE(seg.segment_count, 2 * k) << "image " << i << " k " << k;
      EXPECT_TRUE(is_valid_segmentation(seg)) << "image " << i << " k " << k;
    }
  }
}

TEST(Slic, DeterministicAndValidated) {
  const auto img = testing::random_image_avoiding_mean(40, 30, 8);
  const auto a = slic_segment(img, {.k = 12, .compactness = 20.0, .iterations = 5});
  const auto b = slic_segment(img, {.k = 12, .compactness = 20.0, .iterations = 5});
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(code_of([] { slic_segment(ImageBuffer(4, 4), {.k = 17}); }), ErrorCode::kTooManySegments);
  EXPECT_EQ(code_of([] { slic_segment(ImageBuffer(4, 4), {.k = 1}); }), ErrorCode::kTooSmall);
  EXPECT_EQ(code_of([] { slic_segment(ImageBuffer(4, 4), {.k = 4, .compactness = 0.0}); }),
            ErrorCode::kInvalidArgument);
}

TEST(Segmentation, ValidityCheck) {
  auto grid = grid_segmentation(8, 6, 4, 3);
  EXPECT_EQ(grid.segment_count, 12u);
  EXPECT_TRUE(is_valid_segmentation(grid));
  auto split = grid;
  split.labels[0] = 5;  // detached pixel of segment 5
  EXPECT_FALSE(is_valid_segmentation(split));
  auto missing = grid_segmentation(4, 4, 2, 2);
  missing.segment_count = 5;
  EXPECT_FALSE(is_valid_segmentation(missing));
}

TEST(RandomAttribution, Contract) {
  EXPECT_EQ(random_attribution(5, 1).values, random_attribution(5, 1).values);
  EXPECT_NE(random_attribution(5, 1).values, random_attribution(5, 2).values);
  const auto r = random_attribution(5, 9);
  ASSERT_EQ(r.size(), 5u);
  for (double v : r.values) {
    EXPECT_GT(v, -1.0);
    EXPECT_LT(v, 1.0);
  }
  const auto big = random_attribution(100000, 4);
  EXPECT_NEAR(std::accumulate(big.values.begin(), big.values.end(), 0.0) / 1e5, 0.0, 0.01);
}

TEST(AttributionToPixels, Examples) {
  const auto d = partition_image(ImageBuffer(6, 6), 3);
  const auto constant = attribution_to_pixels(d, {std::vector<double>(9, 0.25)});
  for (double v : constant.values) EXPECT_EQ(v, 0.25);
  std::vector<double> one_hot(9, 0.0);
  one_hot[0] = 1.0;
  const auto hot = attribution_to_pixels(d, {one_hot});
  for (std::size_t y = 0; y < 6; ++y) {
    for (std::size_t x = 0; x < 6; ++x) EXPECT_EQ(hot.at(x, y), x < 2 && y < 2 ? 1.0 : 0.0);
  }
  const auto r = random_attribution(9, 3);
  const auto px = attribution_to_pixels(d, r);
  EXPECT_NEAR(std::accumulate(px.values.begin(), px.values.end(), 0.0),
              std::accumulate(r.values.begin(), r.values.end(), 0.0) * 4.0, 1e-12);
  EXPECT_EQ(code_of([&] { attribution_to_pixels(tokenize_text("a b"), {{1.0, 2.0}}); }), ErrorCode::kModalityMismatch);
  EXPECT_EQ(code_of([&] { attribution_to_pixels(d, {{1.0}}); }), ErrorCode::kDimensionMismatch);
}

TEST(RankSegments, MeanDescendingTiesById) {
  const auto seg = grid_segmentation(4, 2, 2, 1);  // two 2x2 segments
  PixelAttribution a{4, 2, {1, 1, 5, 5, 1, 1, 5, 5}};
  EXPECT_EQ(rank_segments(a, seg), (std::vector<std::size_t>{1, 0}));
  PixelAttribution tie{4, 2, std::vector<double>(8, 0.5)};
  EXPECT_EQ(rank_segments(tie, seg), (std::vector<std::size_t>{0, 1}));
}

TEST(Irof, ConstantModelHasZeroArea) {
  const auto img = testing::random_image_avoiding_mean(16, 16, 1);
  SyntheticPairModel model({.bias = 0.8});
  const auto seg = grid_segmentation(16, 16, 4, 4);
  const auto rep = irof(model, img, {16, 16, std::vector<double>(256, 0.0)}, seg, 0);
  ASSERT_EQ(rep.curve.size(), 17u);
  for (double c : rep.curve) EXPECT_EQ(c, 1.0);
  EXPECT_EQ(rep.irof, 0.0);
  EXPECT_EQ(rep.segment_count, 16u);
  EXPECT_EQ(rep.original_score, 0.8);
}

TEST(Irof, SurvivingFractionClosedForm) {
  for (std::size_t cols : {2, 4, 5}) {
    const std::size_t w = cols * 6;
    const auto img = testing::random_image_avoiding_mean(w, 12, cols);
    SurvivingFractionModel model(mean_color(img));
    const auto seg = grid_segmentation(w, 12, cols, 3);
    const double L = static_cast<double>(seg.segment_count);
    std::vector<double> last;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto local = random_attribution(seg.segment_count, seed);
      PixelAttribution px{w, 12, {}};
      for (auto l : seg.labels) px.values.push_back(local.values[l]);
      const auto rep = irof(model, img, px, seg, 0);
      EXPECT_EQ(rep.curve.front(), 1.0);
      for (std::size_t l = 1; l < rep.curve.size(); ++l) EXPECT_LT(rep.curve[l], rep.curve[l - 1]);
      EXPECT_NEAR(rep.irof, 0.5 * L / (L + 1), 1e-9);
      if (!last.empty()) {
        EXPECT_EQ(rep.curve.back(), last.back());
      }
      last = rep.curve;
    }
  }
}

TEST(Irof, ZeroOriginalScore) {
  const auto img = testing::random_image_avoiding_mean(4, 4, 1);
  SyntheticPairModel model({.bias = 0.0});
  const auto seg = grid_segmentation(4, 4, 2, 2);
  EXPECT_EQ(code_of([&] { irof(model, img, {4, 4, std::vector<double>(16, 0.0)}, seg, 0); }),
            ErrorCode::kZeroOriginalScore);
}

TEST(Irof, ClipsCurveAboveOne) {
  // Score rises when pixels are removed: area must not go negative.
  const auto img = testing::random_image_avoiding_mean(8, 8, 2);
  const Rgb fill = mean_color(img);
  class Inverse final : public Model {
   public:
    explicit Inverse(Rgb f) : inner_(f) {}
    std::vector<double> score(std::span<const ModelInput> in, std::size_t c) override {
      auto s = inner_.score(in, c);
      for (auto& v : s) v = 2.0 - v;
      return s;
    }
    std::size_t batch_size() const noexcept override { return 4; }
    std::string describe() const override { return "inverse"; }

   private:
    SurvivingFractionModel inner_;
  } model(fill);
  const auto seg = grid_segmentation(8, 8, 2, 2);
  const auto rep = irof(model, img, {8, 8, std::vector<double>(64, 0.0)}, seg, 0);
  EXPECT_GT(rep.curve.back(), 1.0);
  EXPECT_EQ(rep.irof, 0.0);
}

TEST(RemoveSegments, FillsOnlyChosen) {
  const auto img = testing::random_image_avoiding_mean(4, 2, 3);
  const auto seg = grid_segmentation(4, 2, 2, 1);
  const std::vector<std::size_t> which = {1};
  const auto out = remove_segments(img, seg, which, {1, 2, 3});
  for (std::size_t y = 0; y < 2; ++y) {
    for (std::size_t x = 0; x < 4; ++x) EXPECT_EQ(out.at(x, y), (x >= 2 ? Rgb{1, 2, 3} : img.at(x, y)));
  }
}

TEST(MeanStd, Population) {
  const std::vector<double> v = {2, 4, 4, 4, 5, 5, 7, 9};
  const auto s = mean_std(v);
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  EXPECT_DOUBLE_EQ(s.stddev, 2.0);
  EXPECT_EQ(s.count, 8u);
  EXPECT_EQ(mean_std(std::vector<double>{}).count, 0u);
}

}  // namespace
}  // namespace rle
