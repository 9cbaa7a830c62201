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

#include "rle/image.hpp"

#include <cmath>

#include "rle/errors.hpp"

namespace rle {

ImageBuffer::ImageBuffer(std::size_t width, std::size_t height)
    : ImageBuffer(width, height, std::vector<std::uint8_t>(width * height * kChannels, 0)) {}

ImageBuffer::ImageBuffer(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width_ == 0 || height_ == 0) {
    fail(ErrorCode::kInvalidArgument, "image dimensions must be positive");
  }
  if (pixels_.size() != width_ * height_ * kChannels) {
    fail(ErrorCode::kDimensionMismatch,
         "pixel buffer holds " + std::to_string(pixels_.size()) + " bytes, expected " +
             std::to_string(width_ * height_ * kChannels));
  }
}

Rgb mean_color(const ImageBuffer& image) {
  std::uint64_t sum[3] = {0, 0, 0};
  const auto px = image.pixels();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    sum[0] += px[i];
    sum[1] += px[i + 1];
    sum[2] += px[i + 2];
  }
  const double count = static_cast<double>(image.pixel_count());
  auto avg = [&](int c) {
    return static_cast<std::uint8_t>(std::lround(static_cast<double>(sum[c]) / count));
  };
  return {avg(0), avg(1), avg(2)};
}

}  // namespace rle
