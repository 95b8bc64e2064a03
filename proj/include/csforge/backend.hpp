// include/csforge/backend.hpp

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

#pragma once

// Client side of the backend protocol shared by the word mapper, the aligner
// and the voice converter: one JSON object per request, one per response,
// carried either as newline-delimited JSON over a child process's standard
// streams or as the body of an HTTP POST. A response of the form
// {"error": {"code": ..., "message": ...}} is a per-request failure.

#include <chrono>
#include <json.hpp>
#include <memory>
#include <string>
#include <string_view>

#include "csforge/audio.hpp"

namespace csforge {

enum class EndpointKind { kBuiltin, kHttp, kCommand };

struct BackendEndpoint {
  EndpointKind kind = EndpointKind::kBuiltin;
  std::string target;  // URL or shell command; empty for builtin
  std::chrono::milliseconds timeout{60000};
  int max_in_flight = 4;

  /// "builtin", "http://host:port/path", "https://...", or anything else,
  /// which is taken as a shell command (an optional "cmd:" prefix is
  /// stripped).
  static BackendEndpoint parse(std::string_view spec);
  std::string describe() const;
};

class JsonChannel {
 public:
  virtual ~JsonChannel() = default;

  /// Sends one request and returns the decoded response object. Throws
  /// BackendUnavailable, BackendTimeout, BackendMalformedResponse (not a
  /// JSON object) or BackendError (protocol error object). Safe to call
  /// from several threads; at most max_in_flight calls are outstanding.
  virtual nlohmann::json exchange(const nlohmann::json& request) = 0;
};

/// Opens an HTTP or subprocess channel. Builtin endpoints have no channel
/// and raise InvalidArgument.
std::unique_ptr<JsonChannel> open_channel(const BackendEndpoint& endpoint);

namespace protocol {

/// Audio travels as base64 of raw little-endian float32 mono samples, with
/// the rate in a sibling "sample_rate" field.
std::string encode_audio(const AudioBuffer& buf);
AudioBuffer decode_audio(std::string_view b64, int sample_rate);

nlohmann::json error_object(std::string_view code, std::string_view message);

/// Throws BackendError if `response` is an error object and
/// BackendMalformedResponse if it is not an object at all.
void check_response(const nlohmann::json& response);

}  // namespace protocol

}  // namespace csforge
