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

// Scripted model bridge used by the protocol tests. The first argument picks
// the behavior; the process speaks the newline-delimited JSON protocol on
// stdin/stdout.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include "json.hpp"
#include "rle/bridge.hpp"

using nlohmann::json;

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Tiny lexicon with one negation bigram.
double sentiment(const std::string& text) {
  static const std::map<std::string, double> lexicon = {
      {"love", 2.0}, {"happy", 2.0}, {"good", 1.5}, {"great", 1.5}, {"hate", -2.0},
      {"suffer", -2.0}, {"bad", -1.5}, {"awful", -1.5}};
  std::istringstream in(text);
  std::string prev;
  std::string word;
  double z = 0.0;
  while (in >> word) {
    auto it = lexicon.find(word);
    if (it != lexicon.end()) z += (prev == "not" ? -1.0 : 1.0) * it->second;
    prev = word;
  }
  return sigmoid(z);
}

double score_input(const std::string& mode, const json& input) {
  if (mode == "sentiment") return sentiment(input.at("text").get<std::string>());
  if (mode == "textlen") return static_cast<double>(input.at("text").get<std::string>().size());
  if (mode == "index") {
    if (input.contains("text")) return std::stod(input.at("text").get<std::string>());
    return rle::base64_decode(input.at("pixels").get<std::string>()).at(0);
  }
  if (mode == "pixelmean") {
    const auto bytes = rle::base64_decode(input.at("pixels").get<std::string>());
    double sum = 0.0;
    for (auto b : bytes) sum += b;
    return sum / (255.0 * static_cast<double>(bytes.size()));
  }
  return 0.42;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "echo";
  if (mode == "exit") return 3;
  std::string line;
  if (!std::getline(std::cin, line)) return 0;
  if (mode == "silent") {
    std::this_thread::sleep_for(std::chrono::seconds(30));
    return 0;
  }
  const int version = mode == "badversion" ? 2 : 1;
  std::cout << json{{"type", "ready"}, {"protocol", version}, {"modalities", {"image", "text"}}}.dump() << std::endl;

  while (std::getline(std::cin, line)) {
    if (mode == "crash") return 4;
    const json req = json::parse(line);
    const auto id = req.at("id").get<std::uint64_t>();
    if (mode == "error") {
      std::cout << json{{"type", "error"}, {"id", id}, {"message", "model exploded"}}.dump() << std::endl;
      continue;
    }
    if (mode == "garbage") {
      std::cout << "this is not json" << std::endl;
      continue;
    }
    if (mode == "nan") {
      std::cout << "{\"type\":\"scores\",\"id\":" << id << ",\"scores\":[";
      for (std::size_t i = 0; i < req.at("inputs").size(); ++i) std::cout << (i ? "," : "") << "NaN";
      std::cout << "]}" << std::endl;
      continue;
    }
    json scores = json::array();
    for (const auto& in : req.at("inputs")) scores.push_back(score_input(mode, in));
    if (mode == "shortcount") scores.erase(scores.begin());
    const std::uint64_t reply_id = mode == "wrongid" ? id + 1 : id;
    std::cout << json{{"type", "scores"}, {"id", reply_id}, {"scores", scores}}.dump() << std::endl;
  }
  return 0;
}
