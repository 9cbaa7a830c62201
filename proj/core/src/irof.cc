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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rle/errors.hpp"
#include "rle/eval.hpp"

namespace rle {

PixelAttribution attribution_to_pixels(const SampleDecomposition& decomp, const LocalExplanation& local) {
  if (decomp.modality() != Modality::kImage) {
    fail(ErrorCode::kModalityMismatch, "pixel attribution needs an image decomposition");
  }
  if (local.size() != decomp.size()) {
    fail(ErrorCode::kDimensionMismatch, "explanation has " + std::to_string(local.size()) + " values for " +
                                            std::to_string(decomp.size()) + " patches");
  }
  const ImageGeometry& geo = *decomp.geometry();
  PixelAttribution out{geo.width, geo.height, std::vector<double>(geo.width * geo.height)};
  for (std::size_t y = 0; y < geo.height; ++y) {
    const std::size_t row = y / geo.patch_height;
    for (std::size_t x = 0; x < geo.width; ++x) {
      out.values[y * geo.width + x] = local.values[row * geo.grid_side + x / geo.patch_width];
    }
  }
  return out;
}

LocalExplanation random_attribution(std::size_t n, std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "random attribution needs n >= 1");
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  LocalExplanation out;
  out.values.resize(n);
  for (auto& v : out.values) {
    do {
      v = dist(engine);
    } while (v <= -1.0 || v >= 1.0);
  }
  return out;
}

std::vector<std::size_t> rank_segments(const PixelAttribution& attribution, const Segmentation& seg) {
  if (attribution.width != seg.width || attribution.height != seg.height ||
      attribution.values.size() != seg.labels.size()) {
    fail(ErrorCode::kDimensionMismatch, "attribution map and segmentation differ in size");
  }
  std::vector<double> sum(seg.segment_count, 0.0);
  std::vector<std::size_t> count(seg.segment_count, 0);
  for (std::size_t p = 0; p < seg.labels.size(); ++p) {
    const double v = attribution.values[p];
    if (!std::isfinite(v)) fail(ErrorCode::kNonFinite, "attribution map contains a non-finite value");
    const auto l = static_cast<std::size_t>(seg.labels[p]);
    sum[l] += v;
    ++count[l];
  }
  std::vector<double> mean(seg.segment_count, 0.0);
  for (std::size_t l = 0; l < mean.size(); ++l) {
    if (count[l] == 0) fail(ErrorCode::kInvalidArgument, "segment " + std::to_string(l) + " is empty");
    mean[l] = sum[l] / static_cast<double>(count[l]);
  }
  std::vector<std::size_t> order(seg.segment_count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mean[a] > mean[b]; });
  return order;
}

ImageBuffer remove_segments(const ImageBuffer& image, const Segmentation& seg, std::span<const std::size_t> segments,
                            Rgb fill) {
  std::vector<bool> removed(seg.segment_count, false);
  for (auto s : segments) {
    if (s >= seg.segment_count) fail(ErrorCode::kInvalidArgument, "segment id out of range");
    removed[s] = true;
  }
  ImageBuffer out = image;
  for (std::size_t y = 0; y < image.height(); ++y) {
    for (std::size_t x = 0; x < image.width(); ++x) {
      if (removed[static_cast<std::size_t>(seg.at(x, y))]) out.set(x, y, fill);
    }
  }
  return out;
}

IrofReport irof(Model& model, const ImageBuffer& image, const PixelAttribution& attribution, const Segmentation& seg,
                std::size_t target_class) {
  if (seg.width != image.width() || seg.height != image.height()) {
    fail(ErrorCode::kDimensionMismatch, "segmentation does not match the image size");
  }
  IrofReport report;
  report.segment_count = seg.segment_count;
  report.segments_removed_order = rank_segments(attribution, seg);
  const Rgb fill = mean_color(image);
  const std::size_t steps = seg.segment_count + 1;

  // Each step removes one more segment, so images are built incrementally.
  std::vector<double> scores;
  scores.reserve(steps);
  ImageBuffer current = image;
  const std::size_t chunk = std::max<std::size_t>(1, model.batch_size());
  std::vector<ModelInput> batch;
  for (std::size_t l = 0; l < steps;) {
    batch.clear();
    for (; l < steps && batch.size() < chunk; ++l) {
      if (l > 0) {
        const std::size_t seg_id = report.segments_removed_order[l - 1];
        for (std::size_t p = 0; p < seg.labels.size(); ++p) {
          if (static_cast<std::size_t>(seg.labels[p]) == seg_id) current.set(p % image.width(), p / image.width(), fill);
        }
      }
      batch.push_back(ModelInput{current, {}, nullptr});
    }
    const auto s = score_batch(model, batch, target_class);
    scores.insert(scores.end(), s.begin(), s.end());
  }

  report.original_score = scores.front();
  if (!(report.original_score > 0.0)) {
    fail(ErrorCode::kZeroOriginalScore,
         "class score of the unmodified image is " + std::to_string(report.original_score) + ", need > 0");
  }
  report.curve.resize(steps);
  std::vector<double> gap(steps);
  for (std::size_t l = 0; l < steps; ++l) {
    report.curve[l] = l == 0 ? 1.0 : scores[l] / report.original_score;
    gap[l] = 1.0 - std::min(report.curve[l], 1.0);
  }
  // Trapezoidal area over the clipped curve at unit spacing, per curve point.
  double area = 0.0;
  for (std::size_t l = 0; l + 1 < steps; ++l) area += 0.5 * (gap[l] + gap[l + 1]);
  report.irof = area / static_cast<double>(steps);
  return report;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  out.count = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.stddev = std::sqrt(ss / static_cast<double>(values.size()));
  return out;
}

}  // namespace rle
