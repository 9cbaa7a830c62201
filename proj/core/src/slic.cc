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
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "rle/errors.hpp"
#include "rle/eval.hpp"

namespace rle {
namespace {

struct Lab {
  double l = 0.0;
  double a = 0.0;
  double b = 0.0;
};

double srgb_to_linear(double c) {
  c /= 255.0;
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double kDelta = 6.0 / 29.0;
  return t > kDelta * kDelta * kDelta ? std::cbrt(t) : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

// sRGB (D65) to CIELAB.
std::vector<Lab> to_lab(const ImageBuffer& image) {
  std::array<double, 256> lin{};
  for (int i = 0; i < 256; ++i) lin[i] = srgb_to_linear(i);
  std::vector<Lab> out(image.pixel_count());
  const auto px = image.pixels();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double r = lin[px[3 * i]];
    const double g = lin[px[3 * i + 1]];
    const double b = lin[px[3 * i + 2]];
    const double x = (0.4124564 * r + 0.3575761 * g + 0.1804375 * b) / 0.95047;
    const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    const double z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) / 1.08883;
    const double fx = lab_f(x);
    const double fy = lab_f(y);
    const double fz = lab_f(z);
    out[i] = {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
  }
  return out;
}

double lab_dist2(const Lab& p, const Lab& q) {
  const double dl = p.l - q.l;
  const double da = p.a - q.a;
  const double db = p.b - q.b;
  return dl * dl + da * da + db * db;
}

struct Center {
  Lab color;
  double x = 0.0;
  double y = 0.0;
};

// Union of the orphan fragments into surviving components.
Segmentation enforce_connectivity(const std::vector<std::int32_t>& raw, std::size_t w, std::size_t h,
                                  std::size_t min_size) {
  const std::size_t npx = w * h;
  std::vector<std::int32_t> comp(npx, -1);
  std::vector<std::int32_t> comp_label;
  std::vector<std::size_t> comp_size;
  std::vector<std::size_t> queue;
  queue.reserve(npx);

  for (std::size_t start = 0; start < npx; ++start) {
    if (comp[start] >= 0) continue;
    const auto id = static_cast<std::int32_t>(comp_size.size());
    const std::int32_t lbl = raw[start];
    queue.clear();
    queue.push_back(start);
    comp[start] = id;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const std::size_t p = queue[qi];
      const std::size_t x = p % w;
      const std::size_t y = p / w;
      auto visit = [&](std::size_t q) {
        if (comp[q] < 0 && raw[q] == lbl) {
          comp[q] = id;
          queue.push_back(q);
        }
      };
      if (x > 0) visit(p - 1);
      if (x + 1 < w) visit(p + 1);
      if (y > 0) visit(p - w);
      if (y + 1 < h) visit(p + w);
    }
    comp_label.push_back(lbl);
    comp_size.push_back(queue.size());
  }

  const std::size_t ncomp = comp_size.size();
  std::vector<std::vector<std::int32_t>> neighbors(ncomp);
  for (std::size_t p = 0; p < npx; ++p) {
    const std::size_t x = p % w;
    const std::size_t y = p / w;
    if (x + 1 < w && comp[p] != comp[p + 1]) {
      neighbors[comp[p]].push_back(comp[p + 1]);
      neighbors[comp[p + 1]].push_back(comp[p]);
    }
    if (y + 1 < h && comp[p] != comp[p + w]) {
      neighbors[comp[p]].push_back(comp[p + w]);
      neighbors[comp[p + w]].push_back(comp[p]);
    }
  }
  for (auto& nb : neighbors) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }

  // The largest fragment of each cluster survives if it is big enough.
  std::int32_t max_label = 0;
  for (auto l : comp_label) max_label = std::max(max_label, l);
  std::vector<std::int32_t> best_comp(static_cast<std::size_t>(max_label) + 1, -1);
  for (std::size_t c = 0; c < ncomp; ++c) {
    auto& best = best_comp[comp_label[c]];
    if (best < 0 || comp_size[c] > comp_size[best]) best = static_cast<std::int32_t>(c);
  }
  std::vector<bool> kept(ncomp, false);
  bool any_kept = false;
  for (auto c : best_comp) {
    if (c >= 0 && comp_size[c] >= min_size) {
      kept[c] = true;
      any_kept = true;
    }
  }
  if (!any_kept) {
    const auto largest = std::max_element(comp_size.begin(), comp_size.end()) - comp_size.begin();
    kept[largest] = true;
  }

  std::vector<std::int32_t> root(ncomp);
  std::iota(root.begin(), root.end(), 0);
  std::vector<std::size_t> merged_size = comp_size;
  std::vector<bool> resolved = kept;
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t c = 0; c < ncomp; ++c) {
      if (resolved[c]) continue;
      std::int32_t target = -1;
      for (auto nb : neighbors[c]) {
        if (!resolved[nb]) continue;
        const std::int32_t r = root[nb];
        if (target < 0 || merged_size[r] > merged_size[target] ||
            (merged_size[r] == merged_size[target] && r < target)) {
          target = r;
        }
      }
      if (target < 0) continue;
      root[c] = target;
      merged_size[target] += comp_size[c];
      resolved[c] = true;
      progress = true;
    }
  }

  Segmentation seg;
  seg.width = w;
  seg.height = h;
  seg.labels.assign(npx, -1);
  std::vector<std::int32_t> final_id(ncomp, -1);
  std::int32_t next = 0;
  for (std::size_t p = 0; p < npx; ++p) {
    const std::int32_t r = root[comp[p]];
    if (final_id[r] < 0) final_id[r] = next++;
    seg.labels[p] = final_id[r];
  }
  seg.segment_count = static_cast<std::size_t>(next);
  return seg;
}

}  // namespace

Segmentation slic_segment(const ImageBuffer& image, const SlicSettings& settings) {
  const std::size_t w = image.width();
  const std::size_t h = image.height();
  const std::size_t npx = w * h;
  if (settings.k < 2) fail(ErrorCode::kTooSmall, "SLIC needs k >= 2");
  if (settings.k > npx) fail(ErrorCode::kTooManySegments, "k exceeds the number of pixels");
  if (!(settings.compactness > 0.0)) fail(ErrorCode::kInvalidArgument, "compactness must be > 0");
  if (settings.iterations < 1) fail(ErrorCode::kInvalidArgument, "SLIC needs at least one iteration");

  const std::vector<Lab> lab = to_lab(image);
  const double step = std::sqrt(static_cast<double>(npx) / static_cast<double>(settings.k));
  const auto kd = static_cast<double>(settings.k);
  std::size_t ny = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(kd * h / w))));
  ny = std::min(ny, h);
  std::size_t nx = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(kd / static_cast<double>(ny))));
  nx = std::min(nx, w);
  const double cell_w = static_cast<double>(w) / static_cast<double>(nx);
  const double cell_h = static_cast<double>(h) / static_cast<double>(ny);

  auto gradient = [&](std::size_t x, std::size_t y) {
    const std::size_t xl = x > 0 ? x - 1 : x;
    const std::size_t xr = x + 1 < w ? x + 1 : x;
    const std::size_t yu = y > 0 ? y - 1 : y;
    const std::size_t yd = y + 1 < h ? y + 1 : y;
    return lab_dist2(lab[y * w + xl], lab[y * w + xr]) + lab_dist2(lab[yu * w + x], lab[yd * w + x]);
  };

  std::vector<Center> centers;
  centers.reserve(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      double cx = (static_cast<double>(i) + 0.5) * cell_w - 0.5;
      double cy = (static_cast<double>(j) + 0.5) * cell_h - 0.5;
      const auto rx = static_cast<std::size_t>(std::clamp<long>(std::lround(cx), 0, static_cast<long>(w) - 1));
      const auto ry = static_cast<std::size_t>(std::clamp<long>(std::lround(cy), 0, static_cast<long>(h) - 1));
      double best = gradient(rx, ry);
      std::size_t bx = rx;
      std::size_t by = ry;
      for (long dy = -1; dy <= 1; ++dy) {
        for (long dx = -1; dx <= 1; ++dx) {
          const long x = static_cast<long>(rx) + dx;
          const long y = static_cast<long>(ry) + dy;
          if (x < 0 || y < 0 || x >= static_cast<long>(w) || y >= static_cast<long>(h)) continue;
          const double g = gradient(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
          if (g < best) {
            best = g;
            bx = static_cast<std::size_t>(x);
            by = static_cast<std::size_t>(y);
          }
        }
      }
      if (bx != rx || by != ry) {
        cx = static_cast<double>(bx);
        cy = static_cast<double>(by);
      }
      centers.push_back({lab[by * w + bx], cx, cy});
    }
  }

  const double spatial = (settings.compactness / step) * (settings.compactness / step);
  const double radius = std::max(cell_w, cell_h);
  std::vector<std::int32_t> labels(npx, -1);
  std::vector<double> dist(npx);

  auto d2 = [&](const Center& c, std::size_t x, std::size_t y) {
    const double dx = static_cast<double>(x) - c.x;
    const double dy = static_cast<double>(y) - c.y;
    return lab_dist2(lab[y * w + x], c.color) + spatial * (dx * dx + dy * dy);
  };

  for (std::size_t it = 0; it < settings.iterations; ++it) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    std::fill(labels.begin(), labels.end(), -1);
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const Center& ctr = centers[c];
      const auto x0 = static_cast<std::size_t>(std::max(0.0, std::floor(ctr.x - radius)));
      const auto y0 = static_cast<std::size_t>(std::max(0.0, std::floor(ctr.y - radius)));
      const auto x1 = static_cast<std::size_t>(std::min(static_cast<double>(w - 1), std::ceil(ctr.x + radius)));
      const auto y1 = static_cast<std::size_t>(std::min(static_cast<double>(h - 1), std::ceil(ctr.y + radius)));
      for (std::size_t y = y0; y <= y1; ++y) {
        for (std::size_t x = x0; x <= x1; ++x) {
          const double d = d2(ctr, x, y);
          if (d < dist[y * w + x]) {
            dist[y * w + x] = d;
            labels[y * w + x] = static_cast<std::int32_t>(c);
          }
        }
      }
    }
    // Pixels outside every search window go to the globally nearest center.
    for (std::size_t p = 0; p < npx; ++p) {
      if (labels[p] >= 0) continue;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = d2(centers[c], p % w, p / w);
        if (d < best) {
          best = d;
          labels[p] = static_cast<std::int32_t>(c);
        }
      }
    }

    std::vector<double> acc(centers.size() * 5, 0.0);
    std::vector<std::size_t> count(centers.size(), 0);
    for (std::size_t p = 0; p < npx; ++p) {
      const auto c = static_cast<std::size_t>(labels[p]);
      acc[5 * c] += lab[p].l;
      acc[5 * c + 1] += lab[p].a;
      acc[5 * c + 2] += lab[p].b;
      acc[5 * c + 3] += static_cast<double>(p % w);
      acc[5 * c + 4] += static_cast<double>(p / w);
      ++count[c];
    }
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (count[c] == 0) continue;
      const double inv = 1.0 / static_cast<double>(count[c]);
      centers[c] = {{acc[5 * c] * inv, acc[5 * c + 1] * inv, acc[5 * c + 2] * inv}, acc[5 * c + 3] * inv,
                    acc[5 * c + 4] * inv};
    }
  }

  const auto min_size = static_cast<std::size_t>(std::max(1.0, std::floor(step * step / 4.0)));
  return enforce_connectivity(labels, w, h, min_size);
}

Segmentation grid_segmentation(std::size_t width, std::size_t height, std::size_t cols, std::size_t rows) {
  if (cols == 0 || rows == 0 || cols > width || rows > height) {
    fail(ErrorCode::kInvalidArgument, "grid segmentation needs 1 <= cols <= width and 1 <= rows <= height");
  }
  Segmentation seg;
  seg.width = width;
  seg.height = height;
  seg.segment_count = cols * rows;
  seg.labels.resize(width * height);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      seg.labels[y * width + x] = static_cast<std::int32_t>((y * rows / height) * cols + x * cols / width);
    }
  }
  return seg;
}

bool is_valid_segmentation(const Segmentation& seg) {
  const std::size_t npx = seg.width * seg.height;
  if (seg.labels.size() != npx || seg.segment_count == 0) return false;
  std::vector<std::size_t> size(seg.segment_count, 0);
  std::vector<std::size_t> first(seg.segment_count, npx);
  for (std::size_t p = 0; p < npx; ++p) {
    const auto l = seg.labels[p];
    if (l < 0 || static_cast<std::size_t>(l) >= seg.segment_count) return false;
    if (size[l]++ == 0) first[l] = p;
  }
  std::vector<bool> seen(npx, false);
  std::vector<std::size_t> queue;
  for (std::size_t l = 0; l < seg.segment_count; ++l) {
    if (size[l] == 0) return false;
    queue.assign(1, first[l]);
    seen[first[l]] = true;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const std::size_t p = queue[qi];
      const std::size_t x = p % seg.width;
      const std::size_t y = p / seg.width;
      auto visit = [&](std::size_t q) {
        if (!seen[q] && seg.labels[q] == static_cast<std::int32_t>(l)) {
          seen[q] = true;
          queue.push_back(q);
        }
      };
      if (x > 0) visit(p - 1);
      if (x + 1 < seg.width) visit(p + 1);
      if (y > 0) visit(p - seg.width);
      if (y + 1 < seg.height) visit(p + seg.width);
    }
    if (queue.size() != size[l]) return false;
  }
  return true;
}

}  // namespace rle
