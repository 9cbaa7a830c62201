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

#include "rle/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rle/errors.hpp"

namespace rle {
namespace {

std::uint8_t blend_channel(std::uint8_t base, std::uint8_t tint, double alpha) {
  const double v = (1.0 - alpha) * base + alpha * tint;
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

Rgb blend(Rgb base, Rgb tint, double alpha) {
  return {blend_channel(base.r, tint.r, alpha), blend_channel(base.g, tint.g, alpha),
          blend_channel(base.b, tint.b, alpha)};
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string html_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

double highlight_alpha(double value, double max_abs_value, const RenderStyle& style) {
  if (!(max_abs_value > 0.0)) return 0.0;
  const double rel = std::abs(value) / max_abs_value;
  if (rel < style.highlight_threshold) return 0.0;
  return style.max_alpha * rel;
}

ImageFigures render_image_explanation(const RelationalExplanation& rel, const SampleDecomposition& decomp,
                                      const RenderStyle& style) {
  if (decomp.modality() != Modality::kImage) fail(ErrorCode::kModalityMismatch, "image rendering needs image input");
  if (rel.size() != decomp.size()) fail(ErrorCode::kDimensionMismatch, "explanation size does not match patches");
  const LocalExplanation local = to_local(rel);
  const double local_max = max_abs(local.values);
  const ImageGeometry& geo = *decomp.geometry();

  ImageBuffer overlay = reassemble_image(decomp, identity_placement(decomp.size()));
  for (std::size_t u = 0; u < decomp.size(); ++u) {
    const double alpha = highlight_alpha(local.values[u], local_max, style);
    if (alpha == 0.0) continue;
    const Rgb tint = local.values[u] > 0.0 ? kPositiveColor : kNegativeColor;
    const ImagePatch& p = decomp.patch(u);
    for (std::size_t y = p.y; y < p.y + geo.patch_height; ++y) {
      for (std::size_t x = p.x; x < p.x + geo.patch_width; ++x) overlay.set(x, y, blend(overlay.at(x, y), tint, alpha));
    }
  }

  const std::size_t n = rel.size();
  const std::size_t cell = style.heatmap_cell > 0 ? style.heatmap_cell : std::max<std::size_t>(1, (256 + n - 1) / n);
  const double matrix_max = max_abs(rel.matrix());
  ImageBuffer heatmap(n * cell, n * cell);
  constexpr Rgb kWhite{255, 255, 255};
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      const double value = matrix_max > 0.0 ? rel.at(u, v) / matrix_max : 0.0;
      const Rgb c = blend(kWhite, value >= 0.0 ? kPositiveColor : kNegativeColor, std::abs(value));
      for (std::size_t y = u * cell; y < (u + 1) * cell; ++y) {
        for (std::size_t x = v * cell; x < (v + 1) * cell; ++x) heatmap.set(x, y, c);
      }
    }
  }
  return {std::move(overlay), std::move(heatmap)};
}

TextFigures render_text_explanation(const RelationalExplanation& rel, const SampleDecomposition& decomp,
                                    const RenderStyle& style) {
  if (decomp.modality() != Modality::kText) fail(ErrorCode::kModalityMismatch, "text rendering needs text input");
  if (rel.size() != decomp.size()) fail(ErrorCode::kDimensionMismatch, "explanation size does not match tokens");
  const LocalExplanation local = to_local(rel);
  const double local_max = max_abs(local.values);
  const std::size_t n = decomp.size();

  std::string html =
      "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>Relational explanation</title>\n"
      "<style>span.tok{padding:0 2px;border-radius:3px} td{padding:2px 4px;text-align:right;"
      "font-family:monospace}</style>\n</head>\n<body>\n<h2>Local explanation</h2>\n<p>";
  std::string ansi;
  for (std::size_t u = 0; u < n; ++u) {
    const std::string& word = decomp.token(u).text;
    const double alpha = highlight_alpha(local.values[u], local_max, style);
    if (u > 0) {
      html.push_back(' ');
      ansi.push_back(' ');
    }
    if (alpha == 0.0) {
      html += "<span class=\"tok\" title=\"" + fmt(local.values[u]) + "\">" + html_escape(word) + "</span>";
      ansi += word;
      continue;
    }
    const Rgb base = local.values[u] > 0.0 ? kPositiveColor : kNegativeColor;
    html += "<span class=\"tok\" style=\"background-color:rgba(" + std::to_string(base.r) + "," +
            std::to_string(base.g) + "," + std::to_string(base.b) + "," + fmt(alpha / style.max_alpha, "%.3f") +
            ")\" title=\"" + fmt(local.values[u]) + "\">" + html_escape(word) + "</span>";
    const Rgb bg = blend(Rgb{255, 255, 255}, base, alpha / style.max_alpha);
    ansi += "\x1b[30;48;2;" + std::to_string(bg.r) + ";" + std::to_string(bg.g) + ";" + std::to_string(bg.b) + "m" +
            word + "\x1b[0m";
  }
  html += "</p>\n<h2>Relational explanation</h2>\n<table>\n<tr><th></th>";
  for (std::size_t v = 0; v < n; ++v) html += "<th>" + html_escape(decomp.token(v).text) + "</th>";
  html += "</tr>\n";
  ansi += "\n\n";
  const double matrix_max = max_abs(rel.matrix());
  for (std::size_t u = 0; u < n; ++u) {
    html += "<tr><th>" + html_escape(decomp.token(u).text) + "</th>";
    char label[32];
    std::snprintf(label, sizeof(label), "%3zu ", u);
    ansi += label;
    for (std::size_t v = 0; v < n; ++v) {
      const double value = rel.at(u, v);
      const double a = matrix_max > 0.0 ? std::abs(value) / matrix_max : 0.0;
      const Rgb base = value >= 0.0 ? kPositiveColor : kNegativeColor;
      html += "<td style=\"background-color:rgba(" + std::to_string(base.r) + "," + std::to_string(base.g) + "," +
              std::to_string(base.b) + "," + fmt(a, "%.3f") + ")\">" + fmt(value, "%.4f") + "</td>";
      ansi += fmt(value, "%+9.4f");
    }
    html += "</tr>\n";
    ansi += "\n";
  }
  html += "</table>\n</body>\n</html>\n";
  return {std::move(html), std::move(ansi)};
}

}  // namespace rle
