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

#include "cli_app.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rle/errors.hpp"
#include "rle/image.hpp"
#include "rle/models.hpp"
#include "rle/serialize.hpp"
#include "rle/synthetic.hpp"

namespace rle::cli {
namespace fs = std::filesystem;

namespace {

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kIoError, "cannot write " + path);
  f << content;
  if (!f) fail(ErrorCode::kIoError, "short write to " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// "out/run.json" -> "out/run"
std::string stem_of(const std::string& out) {
  fs::path p(out);
  if (p.has_extension()) p.replace_extension();
  return p.string();
}

void ensure_parent(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) fail(ErrorCode::kIoError, "cannot create " + parent.string() + ": " + ec.message());
  }
}

ExplainSettings explain_settings(const RunConfig& c) {
  ExplainSettings s;
  s.permutations = c.permutations;
  s.seed = c.seed;
  s.permute_mode = c.permute_mode;
  s.surrogate.lambda = c.lambda;
  s.surrogate.penalty = c.penalty;
  s.surrogate.tol = c.tol;
  s.surrogate.max_iter = c.max_iter;
  s.target_class = c.target_class;
  return s;
}

void write_image_figures(const RelationalExplanation& rel, const SampleDecomposition& decomp, const RunConfig& c,
                         const std::string& stem, std::ostream& out) {
  const ImageFigures figs = render_image_explanation(rel, decomp, c.style);
  const std::string ext = c.figure_format == "ppm" ? ".ppm" : ".png";
  write_image(figs.overlay, stem + ".overlay" + ext);
  write_image(figs.heatmap, stem + ".heatmap" + ext);
  out << "wrote " << stem << ".overlay" << ext << "\n"
      << "wrote " << stem << ".heatmap" << ext << "\n";
}

void write_text_figures(const RelationalExplanation& rel, const SampleDecomposition& decomp, const RunConfig& c,
                        const std::string& stem, std::ostream& out) {
  const TextFigures figs = render_text_explanation(rel, decomp, c.style);
  write_text(stem + ".html", figs.html);
  write_text(stem + ".ansi.txt", figs.ansi);
  out << "wrote " << stem << ".html\n"
      << "wrote " << stem << ".ansi.txt\n";
}

void run_explain(const RunConfig& c, std::ostream& out) {
  if (c.out.empty()) fail(ErrorCode::kInvalidArgument, "--out is required");
  auto model = make_model(c.model, c.batch_size);
  const ExplainSettings settings = explain_settings(c);
  const bool image = c.command == Command::kExplainImage;
  if (image && c.images.size() != 1) fail(ErrorCode::kInvalidArgument, "explain-image takes exactly one --image");
  const SampleDecomposition decomp =
      image ? partition_image(read_image(c.images.front()), c.grid_side) : tokenize_text(c.text);
  const RelationalExplanation rel = explain(*model, decomp, settings);

  ensure_parent(c.out);
  write_text(c.out, explanation_to_json(rel, decomp, settings, model->describe()));
  out << "wrote " << c.out << " (n=" << rel.size() << ", m=" << rel.permutations_used << ")\n";
  const std::string stem = stem_of(c.out);
  if (image) {
    write_image_figures(rel, decomp, c, stem, out);
  } else {
    write_text_figures(rel, decomp, c, stem, out);
  }
  const auto best = top_pairs(rel, std::min<std::size_t>(3, pair_count(rel.size())));
  out << "top pairs:";
  for (const auto& p : best) out << " (" << p.u << "," << p.v << ")=" << p.weight;
  out << "\n";
}

std::vector<std::string> collect_images(const RunConfig& c) {
  std::vector<std::string> paths = c.images;
  if (!c.corpus.empty()) {
    std::error_code ec;
    std::vector<std::string> found;
    for (const auto& entry : fs::directory_iterator(c.corpus, ec)) {
      if (!entry.is_regular_file()) continue;
      auto ext = entry.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
      if (ext == ".png" || ext == ".ppm") found.push_back(entry.path().string());
    }
    if (ec) fail(ErrorCode::kIoError, "cannot list corpus " + c.corpus + ": " + ec.message());
    std::sort(found.begin(), found.end());
    paths.insert(paths.end(), found.begin(), found.end());
  }
  if (paths.empty()) fail(ErrorCode::kInvalidArgument, "eval-irof needs --image or --corpus");
  return paths;
}

void run_eval_irof(const RunConfig& c, std::ostream& out) {
  if (c.out.empty()) fail(ErrorCode::kInvalidArgument, "--out is required");
  for (const auto& m : c.methods) {
    if (m != "rle" && m != "random") fail(ErrorCode::kInvalidArgument, "unknown method '" + m + "'");
  }
  auto model = make_model(c.model, c.batch_size);
  const auto paths = collect_images(c);
  std::vector<std::vector<double>> per_method(c.methods.size());
  std::ostringstream lines;

  for (std::size_t i = 0; i < paths.size(); ++i) {
    const ImageBuffer image = read_image(paths[i]);
    const SampleDecomposition decomp = partition_image(image, c.grid_side);
    const Segmentation seg = slic_segment(image, c.slic);
    const std::uint64_t seed = c.seed + i;
    const std::string image_id = fs::path(paths[i]).filename().string();
    for (std::size_t k = 0; k < c.methods.size(); ++k) {
      LocalExplanation local;
      if (c.methods[k] == "rle") {
        ExplainSettings s = explain_settings(c);
        s.seed = seed;
        local = to_local(explain(*model, decomp, s));
      } else {
        local = random_attribution(decomp.size(), seed);
      }
      const IrofReport report = irof(*model, image, attribution_to_pixels(decomp, local), seg, c.target_class);
      per_method[k].push_back(report.irof);
      lines << irof_report_line(report, image_id, c.methods[k], seed) << "\n";
      out << image_id << " " << c.methods[k] << " irof=" << report.irof << " segments=" << report.segment_count
          << "\n";
    }
  }
  for (std::size_t k = 0; k < c.methods.size(); ++k) {
    const MeanStd stats = mean_std(per_method[k]);
    lines << irof_summary_line(c.methods[k], stats) << "\n";
    out << "summary " << c.methods[k] << " " << stats.mean << " +- " << stats.stddev << " (n=" << stats.count
        << ")\n";
  }
  ensure_parent(c.out);
  write_text(c.out, lines.str());
  out << "wrote " << c.out << "\n";
}

void run_render(const RunConfig& c, std::ostream& out) {
  if (c.explanation.empty()) fail(ErrorCode::kInvalidArgument, "render needs --explanation");
  const ParsedExplanation parsed = parse_explanation_json(read_text(c.explanation));
  const RelationalExplanation rel = to_relational(parsed);
  const std::string stem = c.out.empty() ? stem_of(c.explanation) : stem_of(c.out);
  ensure_parent(stem);
  if (parsed.modality == Modality::kImage) {
    if (c.images.size() != 1) fail(ErrorCode::kInvalidArgument, "rendering an image explanation needs one --image");
    const std::size_t grid = parsed.grid_side.value_or(c.grid_side);
    write_image_figures(rel, partition_image(read_image(c.images.front()), grid), c, stem, out);
  } else {
    std::string sentence;
    for (const auto& t : parsed.tokens) sentence += (sentence.empty() ? "" : " ") + t;
    write_text_figures(rel, tokenize_text(sentence), c, stem, out);
  }
}

void run_synth_image(const RunConfig& c, std::ostream& out) {
  if (c.out.empty()) fail(ErrorCode::kInvalidArgument, "--out is required");
  const SyntheticImage img = make_patch_image(c.grid_side, c.patch_px, c.seed);
  ensure_parent(c.out);
  write_image(img.image, c.out);
  const ColorPairModel model(color_pair_for(img, c.pair_a, c.pair_b));
  out << model.describe() << "\n";
}

}  // namespace

void run(const RunConfig& config, std::ostream& out) {
  switch (config.command) {
    case Command::kExplainImage:
    case Command::kExplainText:
      run_explain(config, out);
      break;
    case Command::kEvalIrof:
      run_eval_irof(config, out);
      break;
    case Command::kRender:
      run_render(config, out);
      break;
    case Command::kSynthImage:
      run_synth_image(config, out);
      break;
  }
}

std::string exit_code_help() {
  std::ostringstream os;
  os << "Exit codes:\n  0  success\n  1  unexpected failure\n  2  invalid command line\n";
  for (int i = 0; i < kErrorCodeCount; ++i) {
    const auto code = static_cast<ErrorCode>(i);
    os << "  " << exit_code_for(code) << "  " << error_code_name(code) << "\n";
  }
  os << "\nEnvironment:\n  RLE_BRIDGE_TIMEOUT_SECS  bridge handshake timeout (default 30)\n";
  return os.str();
}

namespace {

void add_model_options(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--model", c.model,
                  "builtin:pairs:<u>-<v>=<coef>,...[;bias=..;noise=..;noise_seed=..] | builtin:const:<x> | "
                  "builtin:colorpair:grid=..;a=rrggbb;b=rrggbb | bridge:<command>")
      ->required();
  cmd->add_option("--class", c.target_class, "target class index")->capture_default_str();
  cmd->add_option("--batch-size", c.batch_size, "inputs per model request")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_explain_options(CLI::App* cmd, RunConfig& c, std::string& perms, std::string& penalty, std::string& mode) {
  cmd->add_option("--perms", perms, "number of permutations, or 'auto' (5000 image / 2000 text)")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
  cmd->add_option("--lambda", c.lambda, "surrogate regularization strength")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--penalty", penalty, "surrogate penalty")->check(CLI::IsMember({"l1", "l2"}))->capture_default_str();
  cmd->add_option("--permute-mode", mode, "permutation scheme")
      ->check(CLI::IsMember({"replacement", "shuffle"}))
      ->capture_default_str();
  cmd->add_option("--tol", c.tol, "coordinate descent tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--max-iter", c.max_iter, "coordinate descent sweep limit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_render_options(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--threshold", c.style.highlight_threshold, "highlight threshold as a fraction of max |e_x|")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--figure-format", c.figure_format, "image figure format")
      ->check(CLI::IsMember({"png", "ppm"}))
      ->capture_default_str();
}

}  // namespace

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relational local explanations for black-box image and text models"};
  app.footer(exit_code_help());
  app.require_subcommand(1);

  RunConfig c;
  std::string perms = "auto";
  std::string penalty = "l1";
  std::string mode = "replacement";

  auto* ei = app.add_subcommand("explain-image", "explain an image classifier decision");
  add_model_options(ei, c);
  ei->add_option("--image", c.images, "input PNG or PPM")->required()->check(CLI::ExistingFile);
  ei->add_option("--grid", c.grid_side, "patches per side")->capture_default_str();
  ei->add_option("--out", c.out, "explanation JSON path")->required();
  add_explain_options(ei, c, perms, penalty, mode);
  add_render_options(ei, c);

  auto* et = app.add_subcommand("explain-text", "explain a text classifier decision");
  add_model_options(et, c);
  et->add_option("--text", c.text, "sentence to explain")->required();
  et->add_option("--out", c.out, "explanation JSON path")->required();
  add_explain_options(et, c, perms, penalty, mode);
  add_render_options(et, c);

  auto* ev = app.add_subcommand("eval-irof", "IROF benchmark of RLE against a random baseline");
  add_model_options(ev, c);
  ev->add_option("--image", c.images, "input images")->check(CLI::ExistingFile);
  ev->add_option("--corpus", c.corpus, "directory of PNG/PPM images")->check(CLI::ExistingDirectory);
  ev->add_option("--grid", c.grid_side, "patches per side")->capture_default_str();
  ev->add_option("--methods", c.methods, "attribution methods (rle, random)")->delimiter(',')->capture_default_str();
  ev->add_option("--slic-k", c.slic.k, "target SLIC segment count")->capture_default_str();
  ev->add_option("--slic-compactness", c.slic.compactness, "SLIC compactness")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ev->add_option("--slic-iters", c.slic.iterations, "SLIC iterations")->check(CLI::PositiveNumber)->capture_default_str();
  ev->add_option("--out", c.out, "JSON-lines report path")->required();
  add_explain_options(ev, c, perms, penalty, mode);

  auto* rd = app.add_subcommand("render", "render figures from an explanation JSON");
  rd->add_option("--explanation", c.explanation, "explanation JSON")->required()->check(CLI::ExistingFile);
  rd->add_option("--image", c.images, "source image (image explanations)")->check(CLI::ExistingFile);
  rd->add_option("--out", c.out, "output path stem (defaults to the explanation path)");
  add_render_options(rd, c);

  auto* si = app.add_subcommand("synth-image", "write a synthetic patch image and print a matching colorpair model");
  si->add_option("--grid", c.grid_side, "patches per side")->capture_default_str();
  si->add_option("--patch", c.patch_px, "patch edge in pixels")->check(CLI::PositiveNumber)->capture_default_str();
  si->add_option("--seed", c.seed, "palette seed")->capture_default_str();
  si->add_option("--pair", [&c](const CLI::results_t& r) {
        if (r.size() != 2) return false;
        c.pair_a = std::stoul(r[0]);
        c.pair_b = std::stoul(r[1]);
        return true;
      }, "patch indices the model responds to (a,b)")
      ->expected(2)
      ->delimiter(',');
  si->add_option("--out", c.out, "output image path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (ei->parsed()) c.command = Command::kExplainImage;
    if (et->parsed()) c.command = Command::kExplainText;
    if (ev->parsed()) c.command = Command::kEvalIrof;
    if (rd->parsed()) c.command = Command::kRender;
    if (si->parsed()) c.command = Command::kSynthImage;
    if (perms != "auto") {
      std::size_t pos = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(perms, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != perms.size() || perms.empty() || perms.front() == '-') {
        err << "--perms: expected a count or 'auto', got '" << perms << "'\n";
        return 2;
      }
      c.permutations = static_cast<std::size_t>(v);
    }
    c.penalty = parse_penalty(penalty);
    c.permute_mode = parse_permute_mode(mode);
    run(c, out);
    return 0;
  } catch (const Error& e) {
    err << "rle: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "rle: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace rle::cli
