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

#ifndef RLE_MODELS_HPP_
#define RLE_MODELS_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rle/decompose.hpp"
#include "rle/image.hpp"

namespace rle {

// A raw input plus, when it came from a permutation, the placement and the
// slot layout that produced it. Synthetic models score from the placement;
// external models only ever see `data`.
struct ModelInput {
  RawInput data;
  Placement placement;
  std::shared_ptr<const SlotLayout> layout;

  bool has_placement() const noexcept { return layout != nullptr && !placement.empty(); }
};

// Black-box scorer. score() returns one value per input, in input order, for
// at most batch_size() inputs. Use score_batch() below for arbitrary sizes
// and finiteness checking.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::vector<double> score(std::span<const ModelInput> inputs, std::size_t target_class) = 0;
  virtual std::size_t batch_size() const noexcept = 0;
  virtual std::string describe() const = 0;
};

// Splits inputs into batch_size() chunks, preserves order and raises
// kScoreNotFinite on NaN/inf.
std::vector<double> score_batch(Model& model, std::span<const ModelInput> inputs, std::size_t target_class);

struct PairTerm {
  std::size_t u = 0;
  std::size_t v = 0;
  double coefficient = 0.0;
};

struct SyntheticSpec {
  std::vector<PairTerm> terms;
  double bias = 0.0;
  double noise_sigma = 0.0;
  std::uint64_t noise_seed = 0;
};

// bias + sum_k coeff_k * [pair_k adjacent under the placement] + N(0, sigma).
// The noise draw is a pure function of (noise_seed, placement), so repeated
// queries of the same input agree.
class SyntheticPairModel final : public Model {
 public:
  explicit SyntheticPairModel(SyntheticSpec spec, std::size_t batch_size = 64);

  std::vector<double> score(std::span<const ModelInput> inputs, std::size_t target_class) override;
  std::size_t batch_size() const noexcept override { return batch_size_; }
  std::string describe() const override;

  const SyntheticSpec& spec() const noexcept { return spec_; }

 private:
  SyntheticSpec spec_;
  std::size_t batch_size_;
};

// Pixel-reading model for grid imagery. For every 4-adjacent slot pair
// (s, t) of a grid_side x grid_side layout it measures the fraction of pixels
// in s matching color_a and in t matching color_b (max-abs channel distance
// <= tolerance), and scores bias + gain * max over ordered pairs of the
// product. On a shuffle of solid-color patches this is exactly
// bias + gain * [patch a adjacent to patch b]; removing pixels of either
// patch lowers the score smoothly.
struct ColorPairSpec {
  std::size_t grid_side = 3;
  Rgb color_a;
  Rgb color_b;
  int tolerance = 24;
  double bias = 0.05;
  double gain = 0.9;
};

class ColorPairModel final : public Model {
 public:
  explicit ColorPairModel(ColorPairSpec spec, std::size_t batch_size = 64);

  std::vector<double> score(std::span<const ModelInput> inputs, std::size_t target_class) override;
  std::size_t batch_size() const noexcept override { return batch_size_; }
  std::string describe() const override;

  double score_image(const ImageBuffer& image) const;

 private:
  ColorPairSpec spec_;
  std::size_t batch_size_;
};

// Parses a model specification:
//   builtin:pairs:<u>-<v>=<coef>[,<u>-<v>=<coef>...][;bias=<x>][;noise=<sigma>][;noise_seed=<n>]
//   builtin:const:<value>
//   builtin:colorpair:grid=<n>;a=<rrggbb>;b=<rrggbb>[;tol=<n>][;bias=<x>][;gain=<x>]
//   bridge:<command line>
std::unique_ptr<Model> make_model(std::string_view spec, std::size_t batch_size = 64);

SyntheticSpec parse_synthetic_spec(std::string_view body);
ColorPairSpec parse_color_pair_spec(std::string_view body);
std::string to_hex(Rgb c);
Rgb parse_hex_color(std::string_view hex);

}  // namespace rle

#endif  // RLE_MODELS_HPP_
