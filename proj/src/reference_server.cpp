// src/reference_server.cpp

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

#include "csforge/reference_server.hpp"

#include <httplib.h>

#include <istream>
#include <ostream>

#include "csforge/error.hpp"
#include "csforge/lexicon.hpp"

namespace csforge {

using nlohmann::json;

ReferenceBackends make_reference_backends(
    const std::optional<std::filesystem::path>& lexicon) {
  ReferenceBackends b;
  if (lexicon) b.mapper = std::make_shared<LexiconMapper>(*lexicon);
  b.aligner = std::make_shared<UniformAligner>();
  b.converter = std::make_shared<IdentityConverter>();
  return b;
}

namespace {

json dispatch(ReferenceBackends& backends, const json& request,
              const std::string& only_kind) {
  if (!request.is_object()) {
    fail(ErrorCode::kInvalidArgument, "request is not a JSON object");
  }
  const std::string kind = request.value("kind", "");
  if (!only_kind.empty() && kind != only_kind) {
    fail(ErrorCode::kInvalidArgument,
         "this server answers '" + only_kind + "' requests, got '" + kind + "'");
  }
  try {
    if (kind == "word_map") {
      if (!backends.mapper) {
        fail(ErrorCode::kBackendUnavailable, "no lexicon configured");
      }
      return backends.mapper->map(MappingRequest::from_json(request));
    }
    if (kind == "align") {
      const AudioBuffer audio = protocol::decode_audio(
          request.at("audio_b64").get<std::string>(),
          request.at("sample_rate").get<int>());
      const auto tokens = request.at("tokens").get<std::vector<std::string>>();
      return make_align_response(backends.aligner->align_tokens(
          audio, tokens, request.value("lang", ""),
          request.value("romanized", false)));
    }
    if (kind == "vc") {
      const int rate = request.at("sample_rate").get<int>();
      const AudioBuffer input =
          protocol::decode_audio(request.at("input_b64").get<std::string>(), rate);
      const AudioBuffer reference = protocol::decode_audio(
          request.at("reference_b64").get<std::string>(), rate);
      return make_vc_response(backends.converter->convert(input, reference));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("malformed request: ") + e.what());
  }
  fail(ErrorCode::kInvalidArgument, "unknown request kind '" + kind + "'");
}

}  // namespace

json handle_protocol_request(ReferenceBackends& backends, const json& request,
                             const std::string& only_kind) {
  try {
    return dispatch(backends, request, only_kind);
  } catch (const Error& e) {
    return protocol::error_object(to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return protocol::error_object("InternalError", e.what());
  }
}

void serve_stdio(ReferenceBackends& backends, std::istream& in,
                 std::ostream& out, const std::string& only_kind) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json response;
    try {
      response = handle_protocol_request(backends, json::parse(line), only_kind);
    } catch (const json::parse_error& e) {
      response = protocol::error_object("InvalidArgument", e.what());
    }
    out << response.dump() << '\n' << std::flush;
  }
}

void serve_http(ReferenceBackends& backends, const std::string& host, int port,
                const std::string& only_kind) {
  httplib::Server server;
  server.Post(R"(/.*)", [&](const httplib::Request& req, httplib::Response& res) {
    json response;
    try {
      response = handle_protocol_request(backends, json::parse(req.body), only_kind);
    } catch (const json::parse_error& e) {
      response = protocol::error_object("InvalidArgument", e.what());
    }
    res.set_content(response.dump(), "application/json");
  });
  if (!server.listen(host, port)) {
    fail(ErrorCode::kIoError,
         "cannot listen on " + host + ":" + std::to_string(port));
  }
}

}  // namespace csforge
