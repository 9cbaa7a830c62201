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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"
#include "rle/errors.hpp"
#include "test_support.hpp"

namespace rle {
namespace {

using nlohmann::json;

RelationalExplanation sample_rel(std::size_t n) {
  std::vector<double> w(pair_count(n));
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = 0.1 * static_cast<double>(k) - 0.25;
  auto rel = RelationalExplanation::from_pair_weights(n, w);
  rel.permutations_used = 123;
  rel.original_score = 0.75;
  return rel;
}

TEST(ExplanationJson, TextFieldsAndRoundTrip) {
  const auto d = tokenize_text("I love you");
  ExplainSettings s;
  s.seed = 9;
  const auto rel = sample_rel(3);
  const std::string text = explanation_to_json(rel, d, s, "builtin:const:1");
  const json j = json::parse(text);
  EXPECT_EQ(j["modality"], "text");
  EXPECT_EQ(j["n"], 3);
  EXPECT_FALSE(j.contains("grid_side"));
  EXPECT_EQ(j["elements"], (json{"I", "love", "you"}));
  EXPECT_EQ(j["settings"]["m"], 123);
  EXPECT_EQ(j["settings"]["seed"], 9);
  EXPECT_EQ(j["settings"]["lambda"], 0.01);
  EXPECT_EQ(j["settings"]["penalty"], "l1");
  EXPECT_EQ(j["settings"]["permute_mode"], "replacement");
  EXPECT_EQ(j["original_score"], 0.75);
  EXPECT_EQ(j["local"].size(), 3u);

  const auto parsed = parse_explanation_json(text);
  EXPECT_EQ(parsed.modality, Modality::kText);
  EXPECT_EQ(parsed.tokens, (std::vector<std::string>{"I", "love", "you"}));
  const auto back = to_relational(parsed);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(back.matrix()[i], rel.matrix()[i]);
  EXPECT_EQ(text, explanation_to_json(rel, d, s, "builtin:const:1"));
}

TEST(ExplanationJson, ImageElements) {
  const auto d = partition_image(ImageBuffer(8, 8), 2);
  const std::string text = explanation_to_json(sample_rel(4), d, {}, "m");
  const json j = json::parse(text);
  EXPECT_EQ(j["grid_side"], 2);
  EXPECT_EQ(j["elements"][3], (json{{"index", 3}, {"row", 1}, {"col", 1}, {"x", 4}, {"y", 4}, {"width", 4}, {"height", 4}}));
  const auto parsed = parse_explanation_json(text);
  EXPECT_EQ(parsed.modality, Modality::kImage);
  EXPECT_EQ(parsed.grid_side, 2u);
}

TEST(ExplanationJson, RejectsMalformed) {
  const auto d = tokenize_text("a b");
  std::string good = explanation_to_json(sample_rel(2), d, {}, "m");
  auto code = [](const std::string& t) {
    try {
      parse_explanation_json(t);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code("{"), ErrorCode::kParseError);
  EXPECT_EQ(code("[]"), ErrorCode::kParseError);
  json j = json::parse(good);
  j["matrix"][0][1] = 5.0;
  EXPECT_EQ(code(j.dump()), ErrorCode::kParseError);
  j = json::parse(good);
  j["matrix"][1][1] = 1.0;
  EXPECT_EQ(code(j.dump()), ErrorCode::kParseError);
  j = json::parse(good);
  j.erase("matrix");
  EXPECT_EQ(code(j.dump()), ErrorCode::kParseError);
  j = json::parse(good);
  j["modality"] = "audio";
  EXPECT_EQ(code(j.dump()), ErrorCode::kParseError);
}

TEST(IrofJson, ReportAndSummary) {
  IrofReport r;
  r.irof = 0.25;
  r.curve = {1.0, 0.5};
  r.segment_count = 1;
  const json line = json::parse(irof_report_line(r, "img.png", "rle", 4));
  EXPECT_EQ(line, (json{{"image_id", "img.png"}, {"segment_count", 1}, {"curve", {1.0, 0.5}}, {"irof", 0.25},
                        {"method", "rle"}, {"seed", 4}}));
  const std::string s = irof_summary_line("random", {0.4344, 0.2311, 50});
  const json sj = json::parse(s);
  EXPECT_EQ(sj["summary"], true);
  EXPECT_EQ(sj["count"], 50);
  EXPECT_EQ(sj["display"], "0.434±0.23");
  EXPECT_EQ(s.find('\n'), std::string::npos);
}

TEST(ImageIo, PngAndPpmRoundTrip) {
  testing::TempDir dir("io");
  const auto img = testing::random_image_avoiding_mean(13, 7, 2);
  write_image(img, dir.file("a.png"));
  write_image(img, dir.file("a.ppm"));
  EXPECT_EQ(read_image(dir.file("a.png")), img);
  EXPECT_EQ(read_image(dir.file("a.ppm")), img);
  EXPECT_EQ(testing::slurp(dir.file("a.ppm")).substr(0, 2), "P6");
  // Detection is by content, not extension.
  std::filesystem::copy_file(dir.file("a.png"), dir.file("misnamed.ppm"));
  EXPECT_EQ(read_image(dir.file("misnamed.ppm")), img);
}

TEST(ImageIo, Errors) {
  testing::TempDir dir("io-err");
  auto code = [](const std::string& p) {
    try {
      read_image(p);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code(dir.file("missing.png")), ErrorCode::kIoError);
  std::ofstream(dir.file("junk.png")) << "definitely not an image";
  EXPECT_EQ(code(dir.file("junk.png")), ErrorCode::kParseError);
  std::ofstream(dir.file("short.ppm"), std::ios::binary) << "P6\n4 4\n255\n\x01\x02";
  EXPECT_EQ(code(dir.file("short.ppm")), ErrorCode::kParseError);
}

TEST(ImageIo, MeanColor) {
  ImageBuffer img(2, 1, {0, 10, 255, 3, 11, 254});
  EXPECT_EQ(mean_color(img), (Rgb{2, 11, 255}));
}

TEST(Errors, NamesAndExitCodes) {
  std::set<int> codes;
  for (int i = 0; i < kErrorCodeCount; ++i) {
    const auto c = static_cast<ErrorCode>(i);
    EXPECT_FALSE(error_code_name(c).empty());
    codes.insert(exit_code_for(c));
  }
  EXPECT_EQ(codes.size(), static_cast<std::size_t>(kErrorCodeCount));
  EXPECT_EQ(*codes.begin(), 10);
  EXPECT_EQ(error_code_name(ErrorCode::kTooFewTokens), "TooFewTokens");
  const Error e(ErrorCode::kIoError, "nope");
  EXPECT_STREQ(e.what(), "IoError: nope");
}

}  // namespace
}  // namespace rle
