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

#include "rle/synthetic.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>

#include "rle/errors.hpp"

namespace rle {
namespace {

int channel_distance(Rgb a, Rgb b) {
  return std::max({std::abs(int(a.r) - int(b.r)), std::abs(int(a.g) - int(b.g)), std::abs(int(a.b) - int(b.b))});
}

// Palette colors come from a 5-level lattice per channel (spacing >= 57).
// The default colorpair tolerance of 24 plus jitter stays below the spacing,
// so no patch matches another patch's color.
constexpr int kLevels = 5;
constexpr int kMinMeanDistance = 32;

std::vector<Rgb> lattice(int jitter) {
  std::vector<Rgb> out;
  auto level = [&](int k) { return static_cast<std::uint8_t>(jitter + k * (255 - 2 * jitter) / (kLevels - 1)); };
  for (int r = 0; r < kLevels; ++r) {
    for (int g = 0; g < kLevels; ++g) {
      for (int b = 0; b < kLevels; ++b) out.push_back({level(r), level(g), level(b)});
    }
  }
  return out;
}

}  // namespace

SyntheticImage make_patch_image(std::size_t grid_side, std::size_t patch_px, std::uint64_t seed, int jitter) {
  if (grid_side < 2) fail(ErrorCode::kTooSmall, "grid_side must be >= 2");
  if (patch_px < 1) fail(ErrorCode::kInvalidArgument, "patch size must be >= 1");
  if (jitter < 0 || jitter > 12) fail(ErrorCode::kInvalidArgument, "jitter must be in [0, 12]");
  const std::size_t n = grid_side * grid_side;
  std::vector<Rgb> candidates = lattice(jitter);
  if (n >= candidates.size()) {
    fail(ErrorCode::kInvalidArgument, "grid_side " + std::to_string(grid_side) + " needs more distinct colors");
  }
  std::mt19937_64 engine(seed);
  std::uniform_int_distribution<int> noise(-jitter, jitter);

  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::shuffle(candidates.begin(), candidates.end(), engine);
    std::vector<Rgb> palette(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(n));

    const std::size_t side = grid_side * patch_px;
    ImageBuffer image(side, side);
    for (std::size_t y = 0; y < side; ++y) {
      for (std::size_t x = 0; x < side; ++x) {
        const Rgb base = palette[(y / patch_px) * grid_side + x / patch_px];
        auto jit = [&](std::uint8_t v) { return static_cast<std::uint8_t>(std::clamp(int(v) + noise(engine), 0, 255)); };
        image.set(x, y, {jit(base.r), jit(base.g), jit(base.b)});
      }
    }
    const Rgb fill = mean_color(image);
    const bool clear_of_fill = std::all_of(palette.begin(), palette.end(),
                                           [&](Rgb p) { return channel_distance(p, fill) >= kMinMeanDistance; });
    if (clear_of_fill) return {std::move(image), std::move(palette), grid_side};
  }
  fail(ErrorCode::kInvalidArgument, "could not draw a palette clear of the mean color for grid_side " +
                                        std::to_string(grid_side));
}

ColorPairSpec color_pair_for(const SyntheticImage& img, std::size_t a, std::size_t b) {
  if (a >= img.palette.size() || b >= img.palette.size() || a == b) {
    fail(ErrorCode::kInvalidArgument, "color pair needs two distinct patch indices");
  }
  ColorPairSpec spec;
  spec.grid_side = img.grid_side;
  spec.color_a = img.palette[a];
  spec.color_b = img.palette[b];
  return spec;
}

}  // namespace rle
