// src/error.cpp

// Copyright 2026  The csforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "csforge/error.hpp"

namespace csforge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedWav: return "MalformedWav";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidCutoff: return "InvalidCutoff";
    case ErrorCode::kEmptyBuffer: return "EmptyBuffer";
    case ErrorCode::kSpanOutOfRange: return "SpanOutOfRange";
    case ErrorCode::kOverlappingSpans: return "OverlappingSpans";
    case ErrorCode::kRateMismatch: return "RateMismatch";
    case ErrorCode::kManifestParseError: return "ManifestParseError";
    case ErrorCode::kMissingAudio: return "MissingAudio";
    case ErrorCode::kTooFewLanguages: return "TooFewLanguages";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kBackendTimeout: return "BackendTimeout";
    case ErrorCode::kBackendMalformedResponse: return "BackendMalformedResponse";
    case ErrorCode::kBackendError: return "BackendError";
    case ErrorCode::kUnparsableDocument: return "UnparsableDocument";
    case ErrorCode::kUnmappableCharacter: return "UnmappableCharacter";
    case ErrorCode::kAlignmentFailed: return "AlignmentFailed";
    case ErrorCode::kWordNotAligned: return "WordNotAligned";
    case ErrorCode::kSubstitutionMiss: return "SubstitutionMiss";
    case ErrorCode::kNoEligiblePairs: return "NoEligiblePairs";
    case ErrorCode::kDegenerateConversion: return "DegenerateConversion";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace csforge
