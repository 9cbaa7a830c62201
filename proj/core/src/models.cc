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

#include "rle/models.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "rle/bridge.hpp"
#include "rle/errors.hpp"

namespace rle {
namespace {

std::uint64_t fnv1a(std::uint64_t h, std::span<const std::uint8_t> bytes) {
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t input_hash(const ModelInput& in, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  if (in.has_placement()) {
    for (std::size_t p : in.placement) {
      const auto v = static_cast<std::uint64_t>(p);
      h = fnv1a(h, std::span(reinterpret_cast<const std::uint8_t*>(&v), sizeof(v)));
    }
    return h;
  }
  if (const auto* img = std::get_if<ImageBuffer>(&in.data)) return fnv1a(h, img->pixels());
  const auto& text = std::get<std::string>(in.data);
  return fnv1a(h, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

bool pair_adjacent(const SlotLayout& layout, std::span<const std::size_t> placement, std::size_t u,
                   std::size_t v) {
  for (const SlotEdge& e : layout.edges()) {
    const std::size_t a = placement[e.first];
    const std::size_t b = placement[e.second];
    if ((a == u && b == v) || (a == v && b == u)) return true;
  }
  return false;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view s, std::string_view what) {
  const std::string str(trim(s));
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  if (str.empty() || end != str.c_str() + str.size() || !std::isfinite(v)) {
    fail(ErrorCode::kParseError, "invalid " + std::string(what) + " '" + str + "'");
  }
  return v;
}

std::uint64_t parse_uint(std::string_view s, std::string_view what) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    fail(ErrorCode::kParseError, "invalid " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::vector<double> score_batch(Model& model, std::span<const ModelInput> inputs, std::size_t target_class) {
  if (inputs.empty()) fail(ErrorCode::kInvalidArgument, "score_batch needs at least one input");
  const bool image = std::holds_alternative<ImageBuffer>(inputs.front().data);
  for (const auto& in : inputs) {
    if (std::holds_alternative<ImageBuffer>(in.data) != image) {
      fail(ErrorCode::kModalityMismatch, "a batch must not mix image and text inputs");
    }
  }
  const std::size_t batch = std::max<std::size_t>(1, model.batch_size());
  std::vector<double> out;
  out.reserve(inputs.size());
  for (std::size_t start = 0; start < inputs.size(); start += batch) {
    const auto chunk = inputs.subspan(start, std::min(batch, inputs.size() - start));
    auto scores = model.score(chunk, target_class);
    if (scores.size() != chunk.size()) {
      fail(ErrorCode::kProtocolError, "model returned " + std::to_string(scores.size()) + " scores for " +
                                          std::to_string(chunk.size()) + " inputs");
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (!std::isfinite(scores[i])) {
        fail(ErrorCode::kScoreNotFinite, "model returned a non-finite score for input " + std::to_string(start + i));
      }
    }
    out.insert(out.end(), scores.begin(), scores.end());
  }
  return out;
}

SyntheticPairModel::SyntheticPairModel(SyntheticSpec spec, std::size_t batch_size)
    : spec_(std::move(spec)), batch_size_(batch_size) {
  if (batch_size_ == 0) fail(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  if (!(spec_.noise_sigma >= 0.0)) fail(ErrorCode::kInvalidArgument, "noise sigma must be >= 0");
  for (const auto& t : spec_.terms) {
    if (t.u == t.v) fail(ErrorCode::kInvalidArgument, "a pair term needs two distinct elements");
  }
}

std::vector<double> SyntheticPairModel::score(std::span<const ModelInput> inputs, std::size_t) {
  std::vector<double> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) {
    double s = spec_.bias;
    if (!spec_.terms.empty()) {
      if (!in.has_placement()) {
        fail(ErrorCode::kMissingPlacement, "synthetic pair model needs placement metadata");
      }
      const std::size_t n = in.layout->slot_count();
      for (const auto& t : spec_.terms) {
        if (t.u >= n || t.v >= n) {
          fail(ErrorCode::kInvalidArgument, "pair term references element beyond " + std::to_string(n));
        }
        if (pair_adjacent(*in.layout, in.placement, t.u, t.v)) s += t.coefficient;
      }
    }
    if (spec_.noise_sigma > 0.0) {
      std::mt19937_64 engine(input_hash(in, spec_.noise_seed));
      std::normal_distribution<double> noise(0.0, spec_.noise_sigma);
      s += noise(engine);
    }
    out.push_back(s);
  }
  return out;
}

std::string SyntheticPairModel::describe() const {
  std::ostringstream os;
  os << "builtin:pairs:";
  for (std::size_t i = 0; i < spec_.terms.size(); ++i) {
    if (i) os << ',';
    os << spec_.terms[i].u << '-' << spec_.terms[i].v << '=' << spec_.terms[i].coefficient;
  }
  os << ";bias=" << spec_.bias << ";noise=" << spec_.noise_sigma << ";noise_seed=" << spec_.noise_seed;
  return os.str();
}

ColorPairModel::ColorPairModel(ColorPairSpec spec, std::size_t batch_size)
    : spec_(spec), batch_size_(batch_size) {
  if (batch_size_ == 0) fail(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  if (spec_.grid_side < 2) fail(ErrorCode::kTooSmall, "colorpair grid must be >= 2");
  if (spec_.tolerance < 0) fail(ErrorCode::kInvalidArgument, "colorpair tolerance must be >= 0");
}

double ColorPairModel::score_image(const ImageBuffer& image) const {
  const std::size_t g = spec_.grid_side;
  if (image.width() % g != 0 || image.height() % g != 0) {
    fail(ErrorCode::kDimensionNotDivisible, "image is not divisible by the colorpair grid");
  }
  const std::size_t pw = image.width() / g;
  const std::size_t ph = image.height() / g;
  auto close = [&](Rgb p, Rgb c) {
    return std::abs(int(p.r) - int(c.r)) <= spec_.tolerance && std::abs(int(p.g) - int(c.g)) <= spec_.tolerance &&
           std::abs(int(p.b) - int(c.b)) <= spec_.tolerance;
  };
  std::vector<double> frac_a(g * g, 0.0);
  std::vector<double> frac_b(g * g, 0.0);
  for (std::size_t y = 0; y < image.height(); ++y) {
    for (std::size_t x = 0; x < image.width(); ++x) {
      const Rgb p = image.at(x, y);
      const std::size_t s = (y / ph) * g + x / pw;
      if (close(p, spec_.color_a)) frac_a[s] += 1.0;
      if (close(p, spec_.color_b)) frac_b[s] += 1.0;
    }
  }
  const double area = static_cast<double>(pw * ph);
  for (std::size_t s = 0; s < g * g; ++s) {
    frac_a[s] /= area;
    frac_b[s] /= area;
  }
  double best = 0.0;
  const SlotLayout layout = SlotLayout::grid(g);
  for (const SlotEdge& e : layout.edges()) {
    best = std::max(best, frac_a[e.first] * frac_b[e.second]);
    best = std::max(best, frac_a[e.second] * frac_b[e.first]);
  }
  return spec_.bias + spec_.gain * best;
}

std::vector<double> ColorPairModel::score(std::span<const ModelInput> inputs, std::size_t) {
  std::vector<double> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) {
    const auto* img = std::get_if<ImageBuffer>(&in.data);
    if (!img) fail(ErrorCode::kModalityMismatch, "colorpair model only scores images");
    out.push_back(score_image(*img));
  }
  return out;
}

std::string ColorPairModel::describe() const {
  std::ostringstream os;
  os << "builtin:colorpair:grid=" << spec_.grid_side << ";a=" << to_hex(spec_.color_a)
     << ";b=" << to_hex(spec_.color_b) << ";tol=" << spec_.tolerance << ";bias=" << spec_.bias
     << ";gain=" << spec_.gain;
  return os.str();
}

std::string to_hex(Rgb c) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  for (std::uint8_t v : {c.r, c.g, c.b}) {
    s.push_back(kDigits[v >> 4]);
    s.push_back(kDigits[v & 15]);
  }
  return s;
}

Rgb parse_hex_color(std::string_view hex) {
  hex = trim(hex);
  if (!hex.empty() && hex.front() == '#') hex.remove_prefix(1);
  if (hex.size() != 6) fail(ErrorCode::kParseError, "color must be 6 hex digits");
  std::uint8_t v[3];
  for (int i = 0; i < 3; ++i) {
    const auto res = std::from_chars(hex.data() + 2 * i, hex.data() + 2 * i + 2, v[i], 16);
    if (res.ec != std::errc() || res.ptr != hex.data() + 2 * i + 2) {
      fail(ErrorCode::kParseError, "invalid hex color '" + std::string(hex) + "'");
    }
  }
  return {v[0], v[1], v[2]};
}

SyntheticSpec parse_synthetic_spec(std::string_view body) {
  SyntheticSpec spec;
  auto parts = split(body, ';');
  bool first = true;
  for (auto part : parts) {
    if (part.empty()) {
      first = false;
      continue;
    }
    const auto eq = part.find('=');
    const auto key = eq == std::string_view::npos ? part : trim(part.substr(0, eq));
    if (!first || key == "bias" || key == "noise" || key == "noise_seed") {
      if (eq == std::string_view::npos) fail(ErrorCode::kParseError, "expected key=value in '" + std::string(part) + "'");
      const auto value = part.substr(eq + 1);
      if (key == "bias") {
        spec.bias = parse_double(value, "bias");
      } else if (key == "noise") {
        spec.noise_sigma = parse_double(value, "noise");
      } else if (key == "noise_seed") {
        spec.noise_seed = parse_uint(value, "noise_seed");
      } else {
        fail(ErrorCode::kParseError, "unknown synthetic option '" + std::string(key) + "'");
      }
    } else {
      for (auto term : split(part, ',')) {
        const auto dash = term.find('-');
        const auto teq = term.find('=');
        if (dash == std::string_view::npos || teq == std::string_view::npos || dash > teq) {
          fail(ErrorCode::kParseError, "pair term must look like u-v=coef, got '" + std::string(term) + "'");
        }
        PairTerm t;
        t.u = parse_uint(term.substr(0, dash), "pair index");
        t.v = parse_uint(term.substr(dash + 1, teq - dash - 1), "pair index");
        t.coefficient = parse_double(term.substr(teq + 1), "coefficient");
        spec.terms.push_back(t);
      }
    }
    first = false;
  }
  return spec;
}

ColorPairSpec parse_color_pair_spec(std::string_view body) {
  ColorPairSpec spec;
  bool has_a = false;
  bool has_b = false;
  for (auto part : split(body, ';')) {
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) fail(ErrorCode::kParseError, "expected key=value in '" + std::string(part) + "'");
    const auto key = trim(part.substr(0, eq));
    const auto value = part.substr(eq + 1);
    if (key == "grid") {
      spec.grid_side = parse_uint(value, "grid");
    } else if (key == "a") {
      spec.color_a = parse_hex_color(value);
      has_a = true;
    } else if (key == "b") {
      spec.color_b = parse_hex_color(value);
      has_b = true;
    } else if (key == "tol") {
      spec.tolerance = static_cast<int>(parse_uint(value, "tol"));
    } else if (key == "bias") {
      spec.bias = parse_double(value, "bias");
    } else if (key == "gain") {
      spec.gain = parse_double(value, "gain");
    } else {
      fail(ErrorCode::kParseError, "unknown colorpair option '" + std::string(key) + "'");
    }
  }
  if (!has_a || !has_b) fail(ErrorCode::kParseError, "colorpair needs both a= and b= colors");
  return spec;
}

std::unique_ptr<Model> make_model(std::string_view spec, std::size_t batch_size) {
  constexpr std::string_view kBridge = "bridge:";
  constexpr std::string_view kPairs = "builtin:pairs:";
  constexpr std::string_view kConst = "builtin:const:";
  constexpr std::string_view kColorPair = "builtin:colorpair:";
  if (spec.starts_with(kBridge)) {
    BridgeOptions opts;
    opts.batch_size = batch_size;
    opts.handshake_timeout = handshake_timeout_from_env();
    return spawn_bridge(std::string(spec.substr(kBridge.size())), opts);
  }
  if (spec.starts_with(kPairs)) {
    return std::make_unique<SyntheticPairModel>(parse_synthetic_spec(spec.substr(kPairs.size())), batch_size);
  }
  if (spec.starts_with(kConst)) {
    SyntheticSpec s;
    s.bias = parse_double(spec.substr(kConst.size()), "constant");
    return std::make_unique<SyntheticPairModel>(s, batch_size);
  }
  if (spec.starts_with(kColorPair)) {
    return std::make_unique<ColorPairModel>(parse_color_pair_spec(spec.substr(kColorPair.size())), batch_size);
  }
  fail(ErrorCode::kInvalidArgument, "unrecognized model spec '" + std::string(spec) +
                                        "' (expected builtin:pairs:..., builtin:const:..., "
                                        "builtin:colorpair:... or bridge:<command>)");
}

}  // namespace rle
