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

#ifndef RLE_RENDER_HPP_
#define RLE_RENDER_HPP_

#include <cstddef>
#include <string>

#include "rle/decompose.hpp"
#include "rle/explain.hpp"
#include "rle/image.hpp"

namespace rle {

// Green marks positive influence, red negative.
inline constexpr Rgb kPositiveColor{26, 152, 80};
inline constexpr Rgb kNegativeColor{215, 48, 39};

struct RenderStyle {
  // Elements with |e_x| below this fraction of max |e_x| stay unhighlighted.
  double highlight_threshold = 0.2;
  // Overlay opacity at max |e_x|.
  double max_alpha = 0.6;
  // Heatmap cell edge in pixels; 0 picks one so the heatmap is ~256 px wide.
  std::size_t heatmap_cell = 0;
};

struct ImageFigures {
  ImageBuffer overlay;  // local view: patches tinted by sign, alpha by |e_x|
  ImageBuffer heatmap;  // relational view: n x n diverging color scale
};

ImageFigures render_image_explanation(const RelationalExplanation& rel, const SampleDecomposition& decomp,
                                      const RenderStyle& style = {});

struct TextFigures {
  std::string html;
  std::string ansi;
};

TextFigures render_text_explanation(const RelationalExplanation& rel, const SampleDecomposition& decomp,
                                    const RenderStyle& style = {});

// Opacity used for an element, 0 when below the highlight threshold.
double highlight_alpha(double value, double max_abs, const RenderStyle& style);

}  // namespace rle

#endif  // RLE_RENDER_HPP_
