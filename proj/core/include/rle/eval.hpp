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

#ifndef RLE_EVAL_HPP_
#define RLE_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rle/decompose.hpp"
#include "rle/explain.hpp"
#include "rle/image.hpp"
#include "rle/models.hpp"

namespace rle {

// Per-pixel segment ids in [0, segment_count), row-major.
struct Segmentation {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::int32_t> labels;
  std::size_t segment_count = 0;

  std::int32_t at(std::size_t x, std::size_t y) const noexcept { return labels[y * width + x]; }
};

struct SlicSettings {
  std::size_t k = 100;
  double compactness = 10.0;
  std::size_t iterations = 10;
};

// SLIC superpixels: grid-seeded centers nudged to the lowest-gradient pixel of
// their 3x3 neighborhood, local k-means in CIELAB+xy with
// D^2 = d_lab^2 + (compactness / S)^2 * d_xy^2, S = sqrt(W*H/k), then
// connectivity enforcement (each fragment other than a cluster's largest
// piece, and any piece smaller than S^2/4, joins its largest neighbor).
// Every output segment is non-empty and 4-connected.
Segmentation slic_segment(const ImageBuffer& image, const SlicSettings& settings = {});

// Grid segmentation into cols x rows equal rectangles (test and baseline use).
Segmentation grid_segmentation(std::size_t width, std::size_t height, std::size_t cols, std::size_t rows);

// True if every label in [0, segment_count) is present and 4-connected.
bool is_valid_segmentation(const Segmentation& seg);

struct PixelAttribution {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> values;

  double at(std::size_t x, std::size_t y) const noexcept { return values[y * width + x]; }
};

// Paints e_x[u] over every pixel of patch u.
PixelAttribution attribution_to_pixels(const SampleDecomposition& decomp, const LocalExplanation& local);

// i.i.d. uniform values in the open interval (-1, 1), deterministic per seed.
LocalExplanation random_attribution(std::size_t n, std::uint64_t seed);

struct IrofReport {
  double irof = 0.0;
  // curve[l] = f(x^l) / f(x^0) after removing the l most important segments.
  std::vector<double> curve;
  std::vector<std::size_t> segments_removed_order;
  std::size_t segment_count = 0;
  double original_score = 0.0;
};

// Segments ordered by mean attribution, descending; ties by segment id.
std::vector<std::size_t> rank_segments(const PixelAttribution& attribution, const Segmentation& seg);

// Replaces every pixel of the given segments with `fill`.
ImageBuffer remove_segments(const ImageBuffer& image, const Segmentation& seg,
                            std::span<const std::size_t> segments, Rgb fill);

// Iterative removal of segments in attribution order, filling with the
// image's per-channel mean color. With g[l] = 1 - min(curve[l], 1), irof is
// the trapezoidal area under g at unit spacing divided by the L + 1 curve
// points: sum_{l<L} (g[l] + g[l+1]) / 2 / (L + 1). A score that falls
// linearly to zero gives L / (2 (L + 1)).
IrofReport irof(Model& model, const ImageBuffer& image, const PixelAttribution& attribution,
                const Segmentation& seg, std::size_t target_class);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  std::size_t count = 0;
};

MeanStd mean_std(std::span<const double> values);

}  // namespace rle

#endif  // RLE_EVAL_HPP_
