// include/csforge/reference_server.hpp

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

// Serves the built-in reference backends over the backend protocol, so the
// subprocess and HTTP transports can be exercised without a model bridge.

#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>

#include "csforge/alignment.hpp"
#include "csforge/style_unify.hpp"
#include "csforge/word_mapping.hpp"

namespace csforge {

struct ReferenceBackends {
  std::shared_ptr<MapperBackend> mapper;  // null without a lexicon
  std::shared_ptr<AlignerBackend> aligner;
  std::shared_ptr<ConverterBackend> converter;
};

ReferenceBackends make_reference_backends(
    const std::optional<std::filesystem::path>& lexicon);

/// Answers one request. Failures come back as protocol error objects, never
/// as exceptions. When `only_kind` is set, other kinds are refused.
nlohmann::json handle_protocol_request(ReferenceBackends& backends,
                                       const nlohmann::json& request,
                                       const std::string& only_kind = {});

/// Newline-delimited JSON loop until EOF. Unparsable lines get an error
/// object; the loop keeps going.
void serve_stdio(ReferenceBackends& backends, std::istream& in,
                 std::ostream& out, const std::string& only_kind = {});

/// Blocking HTTP server answering POST on any path.
void serve_http(ReferenceBackends& backends, const std::string& host, int port,
                const std::string& only_kind = {});

}  // namespace csforge
