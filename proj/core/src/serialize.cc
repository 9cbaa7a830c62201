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

#include "rle/serialize.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "rle/errors.hpp"

namespace rle {
namespace {

using ojson = nlohmann::ordered_json;

std::string dump(const ojson& j, int indent) { return j.dump(indent, ' ', false, ojson::error_handler_t::replace); }

const ojson& require(const ojson& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorCode::kParseError, std::string("missing field \"") + key + "\"");
  return j[key];
}

}  // namespace

std::string explanation_to_json(const RelationalExplanation& rel, const SampleDecomposition& decomp,
                                const ExplainSettings& settings, std::string_view model_description) {
  const std::size_t n = rel.size();
  ojson j;
  j["modality"] = modality_name(decomp.modality());
  j["n"] = n;
  if (decomp.geometry()) j["grid_side"] = decomp.geometry()->grid_side;
  ojson elements = ojson::array();
  for (std::size_t u = 0; u < decomp.size(); ++u) {
    if (decomp.modality() == Modality::kImage) {
      const ImagePatch& p = decomp.patch(u);
      elements.push_back(
          {{"index", u}, {"row", p.row}, {"col", p.col}, {"x", p.x}, {"y", p.y}, {"width", p.width}, {"height", p.height}});
    } else {
      elements.push_back(decomp.token(u).text);
    }
  }
  j["elements"] = std::move(elements);
  j["target_class"] = rel.target_class;
  ojson matrix = ojson::array();
  for (std::size_t u = 0; u < n; ++u) {
    ojson row = ojson::array();
    for (std::size_t v = 0; v < n; ++v) row.push_back(rel.at(u, v));
    matrix.push_back(std::move(row));
  }
  j["matrix"] = std::move(matrix);
  j["local"] = to_local(rel).values;
  if (rel.original_score) j["original_score"] = *rel.original_score;
  j["model"] = model_description;
  j["settings"] = {{"m", rel.permutations_used},
                   {"seed", settings.seed},
                   {"lambda", settings.surrogate.lambda},
                   {"penalty", penalty_name(settings.surrogate.penalty)},
                   {"permute_mode", permute_mode_name(settings.permute_mode)}};
  if (rel.surrogate) {
    j["surrogate"] = {{"intercept", rel.surrogate->intercept},
                      {"objective", rel.surrogate->objective_value},
                      {"iterations", rel.surrogate->iterations_used},
                      {"converged", rel.surrogate->converged}};
  }
  return dump(j, 2) + "\n";
}

ParsedExplanation parse_explanation_json(std::string_view text) {
  const ojson j = ojson::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) fail(ErrorCode::kParseError, "explanation is not a JSON object");
  ParsedExplanation out;
  try {
    const std::string modality = require(j, "modality").get<std::string>();
    if (modality == "image") {
      out.modality = Modality::kImage;
    } else if (modality == "text") {
      out.modality = Modality::kText;
    } else {
      fail(ErrorCode::kParseError, "unknown modality '" + modality + "'");
    }
    out.n = require(j, "n").get<std::size_t>();
    if (out.n < 2) fail(ErrorCode::kParseError, "n must be >= 2");
    if (j.contains("grid_side")) out.grid_side = j["grid_side"].get<std::size_t>();
    out.target_class = require(j, "target_class").get<std::size_t>();
    const auto& elements = require(j, "elements");
    if (!elements.is_array() || elements.size() != out.n) fail(ErrorCode::kParseError, "elements must have n entries");
    if (out.modality == Modality::kText) {
      for (const auto& e : elements) out.tokens.push_back(e.get<std::string>());
    }
    const auto& matrix = require(j, "matrix");
    if (!matrix.is_array() || matrix.size() != out.n) fail(ErrorCode::kParseError, "matrix must have n rows");
    for (const auto& row : matrix) {
      if (!row.is_array() || row.size() != out.n) fail(ErrorCode::kParseError, "matrix rows must have n entries");
      for (const auto& v : row) out.matrix.push_back(v.get<double>());
    }
    for (const auto& v : require(j, "local")) out.local.push_back(v.get<double>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, std::string("explanation field has the wrong type: ") + e.what());
  }
  for (std::size_t u = 0; u < out.n; ++u) {
    if (out.matrix[u * out.n + u] != 0.0) fail(ErrorCode::kParseError, "matrix diagonal must be zero");
    for (std::size_t v = 0; v < u; ++v) {
      if (out.matrix[u * out.n + v] != out.matrix[v * out.n + u]) fail(ErrorCode::kParseError, "matrix is not symmetric");
    }
  }
  return out;
}

RelationalExplanation to_relational(const ParsedExplanation& parsed) {
  std::vector<double> weights(pair_count(parsed.n));
  for (std::size_t u = 1; u < parsed.n; ++u) {
    for (std::size_t v = 0; v < u; ++v) weights[pair_index(u, v)] = parsed.matrix[u * parsed.n + v];
  }
  RelationalExplanation rel = RelationalExplanation::from_pair_weights(parsed.n, weights);
  rel.target_class = parsed.target_class;
  return rel;
}

std::string irof_report_line(const IrofReport& report, std::string_view image_id, std::string_view method,
                             std::uint64_t seed) {
  ojson j;
  j["image_id"] = image_id;
  j["segment_count"] = report.segment_count;
  j["curve"] = report.curve;
  j["irof"] = report.irof;
  j["method"] = method;
  j["seed"] = seed;
  return dump(j, -1);
}

std::string irof_summary_line(std::string_view method, const MeanStd& stats) {
  char display[64];
  std::snprintf(display, sizeof(display), "%.3f±%.2f", stats.mean, stats.stddev);
  ojson j;
  j["summary"] = true;
  j["method"] = method;
  j["count"] = stats.count;
  j["irof_mean"] = stats.mean;
  j["irof_std"] = stats.stddev;
  j["display"] = display;
  return dump(j, -1);
}

}  // namespace rle
