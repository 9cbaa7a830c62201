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

#ifndef RLE_SERIALIZE_HPP_
#define RLE_SERIALIZE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rle/decompose.hpp"
#include "rle/eval.hpp"
#include "rle/explain.hpp"

namespace rle {

// Explanation document:
// {"modality", "n", "grid_side"?, "elements", "target_class", "matrix",
//  "local", "original_score", "model", "settings": {"m", "seed", "lambda",
//  "penalty", "permute_mode"}, "surrogate": {...}}
// Image elements are {"index","row","col","x","y","width","height"}; text
// elements are the token strings. Output is byte-stable for equal inputs.
std::string explanation_to_json(const RelationalExplanation& rel, const SampleDecomposition& decomp,
                                const ExplainSettings& settings, std::string_view model_description);

struct ParsedExplanation {
  Modality modality = Modality::kText;
  std::size_t n = 0;
  std::optional<std::size_t> grid_side;
  std::vector<std::string> tokens;
  std::size_t target_class = 0;
  std::vector<double> matrix;  // n*n row-major
  std::vector<double> local;
};

// Raises kParseError on malformed documents; validates symmetry and shape.
ParsedExplanation parse_explanation_json(std::string_view text);
RelationalExplanation to_relational(const ParsedExplanation& parsed);

// One JSON line: {"image_id","segment_count","curve","irof","method","seed"}.
std::string irof_report_line(const IrofReport& report, std::string_view image_id, std::string_view method,
                             std::uint64_t seed);
// {"summary":true,"method","count","irof_mean","irof_std","display"}.
std::string irof_summary_line(std::string_view method, const MeanStd& stats);

}  // namespace rle

#endif  // RLE_SERIALIZE_HPP_
