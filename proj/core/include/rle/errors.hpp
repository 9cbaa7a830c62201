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

#ifndef RLE_ERRORS_HPP_
#define RLE_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace rle {

// Every failure raised by the library carries one of these codes. The CLI
// maps each code to a distinct process exit status (see exit_code_for).
enum class ErrorCode {
  kInvalidArgument,
  kIoError,
  kParseError,
  kDimensionNotDivisible,
  kTooSmall,
  kTooFewTokens,
  kIncompletePlacement,
  kAsymmetricInput,
  kDegenerate,
  kNonFinite,
  kDimensionMismatch,
  kRankDeficient,
  kInsufficientPermutations,
  kKOutOfRange,
  kMissingPlacement,
  kModelUnavailable,
  kProtocolError,
  kScoreNotFinite,
  kSpawnFailed,
  kHandshakeTimeout,
  kTooManySegments,
  kZeroOriginalScore,
  kModalityMismatch,
};

inline constexpr int kErrorCodeCount = static_cast<int>(ErrorCode::kModalityMismatch) + 1;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

std::string_view error_code_name(ErrorCode code);

// Exit statuses start at 10 so they never collide with 1 (generic failure)
// or 2 (usage error reported by the argument parser).
int exit_code_for(ErrorCode code);

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace rle

#endif  // RLE_ERRORS_HPP_
