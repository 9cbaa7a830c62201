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

#ifndef RLE_SYNTHETIC_HPP_
#define RLE_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rle/image.hpp"
#include "rle/models.hpp"

namespace rle {

// Grid of solid-color patches with small per-pixel jitter. Palette colors
// are pairwise far apart and far from the image's mean color, so a
// ColorPairModel keyed on two of them sees exact adjacency on shuffles and
// loses signal when those patches are mean-filled.
struct SyntheticImage {
  ImageBuffer image;
  std::vector<Rgb> palette;  // palette[u] is the base color of patch u
  std::size_t grid_side = 0;
};

SyntheticImage make_patch_image(std::size_t grid_side, std::size_t patch_px, std::uint64_t seed, int jitter = 6);

// Model that responds to patches a and b being 4-adjacent.
ColorPairSpec color_pair_for(const SyntheticImage& img, std::size_t a, std::size_t b);

}  // namespace rle

#endif  // RLE_SYNTHETIC_HPP_
