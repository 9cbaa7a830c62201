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

#ifndef RLE_BRIDGE_HPP_
#define RLE_BRIDGE_HPP_

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "rle/models.hpp"

namespace rle {

inline constexpr int kBridgeProtocolVersion = 1;

// Wire protocol: newline-delimited JSON over the child's stdin/stdout.
//   -> {"type":"hello","protocol":1}
//   <- {"type":"ready","protocol":1,"modalities":["image","text"]}
//   -> {"type":"score","id":N,"modality":"image"|"text","target_class":C,"inputs":[...]}
//   <- {"type":"scores","id":N,"scores":[...]}   or   {"type":"error","id":N,"message":"..."}
// Image inputs are {"width":W,"height":H,"channels":3,"pixels":"<base64 RGB8>"},
// text inputs are {"text":"..."}.
std::string encode_hello();
std::string encode_score_request(std::uint64_t id, std::size_t target_class, std::span<const ModelInput> inputs);

struct ReadyMessage {
  int protocol = 0;
  std::vector<std::string> modalities;
};
ReadyMessage decode_ready(const std::string& line);

// Raises kProtocolError on malformed JSON, a mismatched id, the wrong score
// count, a non-numeric score or an error message; kScoreNotFinite on null or
// bare NaN/Infinity scores.
std::vector<double> decode_scores(const std::string& line, std::uint64_t expected_id, std::size_t expected_count);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

struct BridgeOptions {
  std::chrono::milliseconds handshake_timeout{30000};
  std::size_t batch_size = 64;
};

// Reads RLE_BRIDGE_TIMEOUT_SECS, falling back to the 30 s default.
std::chrono::milliseconds handshake_timeout_from_env();

// Model served by a child process. Requests are serialized by an internal
// mutex; one request is in flight per handle.
class BridgeModel final : public Model {
 public:
  // argv[0] is resolved through PATH. Raises kSpawnFailed if the process
  // cannot be started or exits during the handshake, kHandshakeTimeout if no
  // ready message arrives in time, kProtocolError on a bad ready message.
  BridgeModel(std::vector<std::string> argv, BridgeOptions options = {});
  ~BridgeModel() override;

  BridgeModel(const BridgeModel&) = delete;
  BridgeModel& operator=(const BridgeModel&) = delete;

  std::vector<double> score(std::span<const ModelInput> inputs, std::size_t target_class) override;
  std::size_t batch_size() const noexcept override { return options_.batch_size; }
  std::string describe() const override;

  const std::vector<std::string>& modalities() const noexcept { return modalities_; }
  int pid() const noexcept { return pid_; }

 private:
  void write_line(const std::string& line);
  // A zero timeout waits forever. Raises kHandshakeTimeout when a bounded
  // wait expires, kModelUnavailable on EOF.
  std::string read_line(std::chrono::milliseconds timeout, bool during_handshake);
  void shutdown() noexcept;

  std::vector<std::string> argv_;
  BridgeOptions options_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string read_buffer_;
  std::uint64_t next_id_ = 1;
  std::vector<std::string> modalities_;
  std::mutex mutex_;
};

// Splits a shell-like command line (quotes honored, no expansion of
// commands) and starts a BridgeModel.
std::unique_ptr<BridgeModel> spawn_bridge(const std::string& command_line, BridgeOptions options = {});

}  // namespace rle

#endif  // RLE_BRIDGE_HPP_
