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

#ifndef RLE_TOOLS_CLI_APP_HPP_
#define RLE_TOOLS_CLI_APP_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rle/eval.hpp"
#include "rle/explain.hpp"
#include "rle/render.hpp"

namespace rle::cli {

enum class Command { kExplainImage, kExplainText, kEvalIrof, kRender, kSynthImage };

struct RunConfig {
  Command command = Command::kExplainImage;
  std::string model;
  std::vector<std::string> images;
  std::string corpus;
  std::string text;
  std::string explanation;  // render: input explanation JSON
  std::size_t grid_side = 7;
  std::optional<std::size_t> permutations;  // nullopt = auto
  std::uint64_t seed = 0;
  double lambda = 0.01;
  Penalty penalty = Penalty::kL1;
  double tol = 1e-6;
  std::size_t max_iter = 10000;
  PermuteMode permute_mode = PermuteMode::kReplacement;
  std::size_t target_class = 0;
  std::size_t batch_size = 64;
  std::string out;
  std::vector<std::string> methods = {"rle", "random"};
  SlicSettings slic;
  RenderStyle style;
  std::string figure_format = "png";
  // synth-image
  std::size_t patch_px = 32;
  std::size_t pair_a = 4;
  std::size_t pair_b = 5;
};

// Executes one command. Library errors propagate as rle::Error.
void run(const RunConfig& config, std::ostream& out);

// Parses argv, runs, and maps failures to exit codes: 0 success, 2 usage,
// 10 + ErrorCode for library errors, 1 for anything else.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

// Exit code table shown in --help.
std::string exit_code_help();

}  // namespace rle::cli

#endif  // RLE_TOOLS_CLI_APP_HPP_
