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

#include "rle/errors.hpp"

namespace rle {

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDimensionNotDivisible: return "DimensionNotDivisible";
    case ErrorCode::kTooSmall: return "TooSmall";
    case ErrorCode::kTooFewTokens: return "TooFewTokens";
    case ErrorCode::kIncompletePlacement: return "IncompletePlacement";
    case ErrorCode::kAsymmetricInput: return "AsymmetricInput";
    case ErrorCode::kDegenerate: return "Degenerate";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kInsufficientPermutations: return "InsufficientPermutations";
    case ErrorCode::kKOutOfRange: return "KOutOfRange";
    case ErrorCode::kMissingPlacement: return "MissingPlacement";
    case ErrorCode::kModelUnavailable: return "ModelUnavailable";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kScoreNotFinite: return "ScoreNotFinite";
    case ErrorCode::kSpawnFailed: return "SpawnFailed";
    case ErrorCode::kHandshakeTimeout: return "HandshakeTimeout";
    case ErrorCode::kTooManySegments: return "TooManySegments";
    case ErrorCode::kZeroOriginalScore: return "ZeroOriginalScore";
    case ErrorCode::kModalityMismatch: return "ModalityMismatch";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) { return 10 + static_cast<int>(code); }

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace rle
