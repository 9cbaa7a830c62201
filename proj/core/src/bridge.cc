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

#include "rle/bridge.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sodium.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>
#include <wordexp.h>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "rle/errors.hpp"

extern char** environ;

namespace rle {
namespace {

using ojson = nlohmann::ordered_json;

std::string dump_line(const ojson& j) { return j.dump(-1, ' ', false, ojson::error_handler_t::replace); }

// Python's json module writes NaN/Infinity as bare tokens, which are not
// JSON. Rewrite them to null outside of strings so they surface as
// non-finite scores instead of parse failures.
std::string neutralize_non_finite(const std::string& line) {
  std::string out;
  out.reserve(line.size());
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      out.push_back(c);
      if (c == '\\' && i + 1 < line.size()) {
        out.push_back(line[++i]);
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out.push_back(c);
      continue;
    }
    bool replaced = false;
    for (std::string_view tok : {"-Infinity", "Infinity", "NaN"}) {
      if (line.compare(i, tok.size(), tok) == 0) {
        out += "null";
        i += tok.size() - 1;
        replaced = true;
        break;
      }
    }
    if (!replaced) out.push_back(c);
  }
  return out;
}

ojson parse_message(const std::string& line) {
  ojson j = ojson::parse(neutralize_non_finite(line), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail(ErrorCode::kProtocolError, "bridge sent malformed JSON: " + line.substr(0, 200));
  }
  if (!j.contains("type") || !j["type"].is_string()) {
    fail(ErrorCode::kProtocolError, "bridge message lacks a string \"type\" field");
  }
  return j;
}

void ignore_sigpipe_once() {
  static std::once_flag once;
  std::call_once(once, [] {
    struct sigaction current {};
    if (sigaction(SIGPIPE, nullptr, &current) == 0 && current.sa_handler == SIG_DFL) {
      struct sigaction ign {};
      ign.sa_handler = SIG_IGN;
      sigemptyset(&ign.sa_mask);
      sigaction(SIGPIPE, &ign, nullptr);
    }
  });
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  if (sodium_init() < 0) fail(ErrorCode::kInvalidArgument, "libsodium failed to initialize");
  const std::size_t len = sodium_base64_ENCODED_LEN(bytes.size(), sodium_base64_VARIANT_ORIGINAL);
  std::string out(len, '\0');
  sodium_bin2base64(out.data(), len, bytes.data(), bytes.size(), sodium_base64_VARIANT_ORIGINAL);
  out.resize(len - 1);
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (sodium_init() < 0) fail(ErrorCode::kInvalidArgument, "libsodium failed to initialize");
  std::vector<std::uint8_t> out(text.size() / 4 * 3 + 3);
  std::size_t written = 0;
  const char* end = nullptr;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr, &written, &end,
                        sodium_base64_VARIANT_ORIGINAL) != 0 ||
      end != text.data() + text.size()) {
    fail(ErrorCode::kProtocolError, "invalid base64 payload");
  }
  out.resize(written);
  return out;
}

std::string encode_hello() {
  ojson j;
  j["type"] = "hello";
  j["protocol"] = kBridgeProtocolVersion;
  return dump_line(j);
}

std::string encode_score_request(std::uint64_t id, std::size_t target_class, std::span<const ModelInput> inputs) {
  if (inputs.empty()) fail(ErrorCode::kInvalidArgument, "score request needs at least one input");
  const bool image = std::holds_alternative<ImageBuffer>(inputs.front().data);
  ojson j;
  j["type"] = "score";
  j["id"] = id;
  j["modality"] = image ? "image" : "text";
  j["target_class"] = target_class;
  ojson arr = ojson::array();
  for (const auto& in : inputs) {
    ojson item;
    if (const auto* img = std::get_if<ImageBuffer>(&in.data)) {
      if (!image) fail(ErrorCode::kModalityMismatch, "a request must not mix image and text inputs");
      item["width"] = img->width();
      item["height"] = img->height();
      item["channels"] = img->channels();
      item["pixels"] = base64_encode(img->pixels());
    } else {
      if (image) fail(ErrorCode::kModalityMismatch, "a request must not mix image and text inputs");
      item["text"] = std::get<std::string>(in.data);
    }
    arr.push_back(std::move(item));
  }
  j["inputs"] = std::move(arr);
  return dump_line(j);
}

ReadyMessage decode_ready(const std::string& line) {
  const ojson j = parse_message(line);
  if (j["type"] != "ready") fail(ErrorCode::kProtocolError, "expected a ready message, got " + j["type"].dump());
  if (!j.contains("protocol") || !j["protocol"].is_number_integer()) {
    fail(ErrorCode::kProtocolError, "ready message lacks an integer protocol field");
  }
  ReadyMessage out;
  out.protocol = j["protocol"].get<int>();
  if (out.protocol != kBridgeProtocolVersion) {
    fail(ErrorCode::kProtocolError, "bridge speaks protocol " + std::to_string(out.protocol) + ", engine speaks " +
                                        std::to_string(kBridgeProtocolVersion));
  }
  if (j.contains("modalities") && j["modalities"].is_array()) {
    for (const auto& m : j["modalities"]) {
      if (m.is_string()) out.modalities.push_back(m.get<std::string>());
    }
  }
  return out;
}

std::vector<double> decode_scores(const std::string& line, std::uint64_t expected_id, std::size_t expected_count) {
  const ojson j = parse_message(line);
  const auto& type = j["type"];
  if (type == "error") {
    const std::string msg = j.contains("message") && j["message"].is_string() ? j["message"].get<std::string>()
                                                                               : std::string("(no message)");
    fail(ErrorCode::kProtocolError, "bridge reported an error: " + msg);
  }
  if (type != "scores") fail(ErrorCode::kProtocolError, "expected a scores message, got " + type.dump());
  if (!j.contains("id") || !j["id"].is_number_unsigned() || j["id"].get<std::uint64_t>() != expected_id) {
    fail(ErrorCode::kProtocolError, "response id does not echo request id " + std::to_string(expected_id));
  }
  if (!j.contains("scores") || !j["scores"].is_array()) fail(ErrorCode::kProtocolError, "response lacks a scores array");
  const auto& scores = j["scores"];
  if (scores.size() != expected_count) {
    fail(ErrorCode::kProtocolError, "bridge returned " + std::to_string(scores.size()) + " scores for " +
                                        std::to_string(expected_count) + " inputs");
  }
  std::vector<double> out;
  out.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto& s = scores[i];
    if (s.is_null()) fail(ErrorCode::kScoreNotFinite, "bridge returned a non-finite score at index " + std::to_string(i));
    if (!s.is_number()) fail(ErrorCode::kProtocolError, "score at index " + std::to_string(i) + " is not a number");
    const double v = s.get<double>();
    if (!std::isfinite(v)) fail(ErrorCode::kScoreNotFinite, "bridge returned a non-finite score at index " + std::to_string(i));
    out.push_back(v);
  }
  return out;
}

std::chrono::milliseconds handshake_timeout_from_env() {
  const char* env = std::getenv("RLE_BRIDGE_TIMEOUT_SECS");
  if (env == nullptr || *env == '\0') return std::chrono::milliseconds(30000);
  char* end = nullptr;
  const double secs = std::strtod(env, &end);
  if (end == env || *end != '\0' || !std::isfinite(secs) || secs <= 0.0) {
    fail(ErrorCode::kInvalidArgument, "RLE_BRIDGE_TIMEOUT_SECS must be a positive number of seconds");
  }
  return std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(secs * 1000.0)));
}

BridgeModel::BridgeModel(std::vector<std::string> argv, BridgeOptions options)
    : argv_(std::move(argv)), options_(options) {
  if (argv_.empty()) fail(ErrorCode::kSpawnFailed, "empty bridge command");
  if (options_.batch_size == 0) fail(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  ignore_sigpipe_once();

  int in_pipe[2];
  int out_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0) fail(ErrorCode::kSpawnFailed, std::string("pipe: ") + std::strerror(errno));
  if (pipe2(out_pipe, O_CLOEXEC) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    fail(ErrorCode::kSpawnFailed, std::string("pipe: ") + std::strerror(errno));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

  std::vector<char*> cargv;
  for (auto& a : argv_) cargv.push_back(a.data());
  cargv.push_back(nullptr);

  pid_t pid = -1;
  const int rc = posix_spawnp(&pid, cargv[0], &actions, nullptr, cargv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  close(in_pipe[0]);
  close(out_pipe[1]);
  if (rc != 0) {
    close(in_pipe[1]);
    close(out_pipe[0]);
    fail(ErrorCode::kSpawnFailed, "cannot start '" + argv_[0] + "': " + std::strerror(rc));
  }
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];

  try {
    try {
      write_line(encode_hello());
    } catch (const Error& e) {
      fail(ErrorCode::kSpawnFailed, "bridge exited before the handshake (" + std::string(e.what()) + ")");
    }
    const std::string line = read_line(options_.handshake_timeout, true);
    modalities_ = decode_ready(line).modalities;
  } catch (...) {
    shutdown();
    throw;
  }
}

BridgeModel::~BridgeModel() { shutdown(); }

std::string BridgeModel::describe() const {
  std::string s = "bridge:";
  for (std::size_t i = 0; i < argv_.size(); ++i) {
    if (i) s.push_back(' ');
    s += argv_[i];
  }
  return s;
}

void BridgeModel::write_line(const std::string& line) {
  std::string buf = line;
  buf.push_back('\n');
  std::size_t off = 0;
  while (off < buf.size()) {
    const ssize_t n = ::write(to_child_, buf.data() + off, buf.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::kModelUnavailable, std::string("bridge stdin closed: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string BridgeModel::read_line(std::chrono::milliseconds timeout, bool during_handshake) {
  using clock = std::chrono::steady_clock;
  const bool bounded = timeout.count() > 0;
  const auto deadline = clock::now() + timeout;
  for (;;) {
    const auto nl = read_buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = read_buffer_.substr(0, nl);
      read_buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    int wait_ms = -1;
    if (bounded) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()).count();
      if (left <= 0) {
        fail(ErrorCode::kHandshakeTimeout, "no reply from bridge within " + std::to_string(timeout.count()) + " ms");
      }
      wait_ms = static_cast<int>(std::min<long long>(left, 1 << 30));
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int pr = ::poll(&pfd, 1, wait_ms);
    if (pr < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::kModelUnavailable, std::string("poll: ") + std::strerror(errno));
    }
    if (pr == 0) continue;
    char chunk[65536];
    const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::kModelUnavailable, std::string("read: ") + std::strerror(errno));
    }
    if (n == 0) {
      if (during_handshake) fail(ErrorCode::kSpawnFailed, "bridge '" + argv_[0] + "' exited before the handshake");
      fail(ErrorCode::kModelUnavailable, "bridge closed its output");
    }
    read_buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::vector<double> BridgeModel::score(std::span<const ModelInput> inputs, std::size_t target_class) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (pid_ < 0) fail(ErrorCode::kModelUnavailable, "bridge is not running");
  const std::uint64_t id = next_id_++;
  write_line(encode_score_request(id, target_class, inputs));
  const std::string line = read_line(std::chrono::milliseconds(0), false);
  return decode_scores(line, id, inputs.size());
}

void BridgeModel::shutdown() noexcept {
  if (to_child_ >= 0) {
    close(to_child_);
    to_child_ = -1;
  }
  if (from_child_ >= 0) {
    close(from_child_);
    from_child_ = -1;
  }
  if (pid_ > 0) {
    int status = 0;
    bool reaped = false;
    for (int i = 0; i < 100 && !reaped; ++i) {
      const pid_t r = waitpid(pid_, &status, WNOHANG);
      if (r == pid_ || (r < 0 && errno != EINTR)) {
        reaped = true;
      } else {
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
      }
    }
    if (!reaped) {
      kill(pid_, SIGKILL);
      waitpid(pid_, &status, 0);
    }
    pid_ = -1;
  }
}

std::unique_ptr<BridgeModel> spawn_bridge(const std::string& command_line, BridgeOptions options) {
  wordexp_t we;
  const int rc = wordexp(command_line.c_str(), &we, WRDE_NOCMD);
  if (rc != 0) {
    if (rc == WRDE_NOSPACE) wordfree(&we);
    fail(ErrorCode::kSpawnFailed, "cannot parse bridge command '" + command_line + "'");
  }
  std::vector<std::string> argv(we.we_wordv, we.we_wordv + we.we_wordc);
  wordfree(&we);
  if (argv.empty()) fail(ErrorCode::kSpawnFailed, "empty bridge command");
  return std::make_unique<BridgeModel>(std::move(argv), options);
}

}  // namespace rle
