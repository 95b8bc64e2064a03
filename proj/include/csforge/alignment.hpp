// include/csforge/alignment.hpp

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

#include <cstddef>
#include <json.hpp>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csforge/audio.hpp"
#include "csforge/backend.hpp"

namespace csforge {

struct WordAlignment {
  std::string word;  // transcript token, original orthography
  TimeSpan span;
  double score = 1.0;

  bool operator==(const WordAlignment&) const = default;
};

struct AlignerOutput {
  std::vector<TimeSpan> spans;
  std::vector<double> scores;  // empty when the backend reports none
};

class AlignerBackend {
 public:
  virtual ~AlignerBackend() = default;

  /// Whether tokens must be romanized before dispatch.
  virtual bool requires_romanized() const = 0;

  virtual AlignerOutput align_tokens(const AudioBuffer& audio,
                                     std::span<const std::string> tokens,
                                     std::string_view lang,
                                     bool romanized) = 0;
};

/// Reference aligner: splits [0, duration] into consecutive spans whose
/// lengths are proportional to each token's romanized character count
/// (at least 1).
class UniformAligner final : public AlignerBackend {
 public:
  bool requires_romanized() const override { return true; }
  AlignerOutput align_tokens(const AudioBuffer& audio,
                             std::span<const std::string> tokens,
                             std::string_view lang, bool romanized) override;
};

/// Aligner reached through the JSON protocol. Whether it wants romanized
/// tokens is part of its configuration, not negotiated.
class ProtocolAligner final : public AlignerBackend {
 public:
  ProtocolAligner(std::unique_ptr<JsonChannel> channel,
                  bool requires_romanized)
      : channel_(std::move(channel)), romanized_(requires_romanized) {}

  bool requires_romanized() const override { return romanized_; }
  AlignerOutput align_tokens(const AudioBuffer& audio,
                             std::span<const std::string> tokens,
                             std::string_view lang, bool romanized) override;

 private:
  std::unique_ptr<JsonChannel> channel_;
  bool romanized_;
};

nlohmann::json make_align_request(const AudioBuffer& audio,
                                  std::span<const std::string> tokens,
                                  std::string_view lang, bool romanized);
nlohmann::json make_align_response(const AlignerOutput& out);
/// Throws BackendMalformedResponse on a wrong shape.
AlignerOutput parse_align_response(const nlohmann::json& response);

/// One WordAlignment per transcript token. Throws AlignmentFailed when the
/// backend returns the wrong number of spans or spans that are not
/// monotone, non-overlapping and inside the utterance.
std::vector<WordAlignment> align(AlignerBackend& backend,
                                 const AudioBuffer& audio,
                                 std::string_view transcript,
                                 std::string_view lang);

/// Token index range [first, last) of the first occurrence of `side`.
std::optional<std::pair<std::size_t, std::size_t>> locate_tokens(
    std::span<const WordAlignment> alignments, std::string_view side);

/// From the first matched token's start to the last one's end. Throws
/// WordNotAligned when `side` does not occur.
TimeSpan locate_word(std::span<const WordAlignment> alignments,
                     std::string_view side);

}  // namespace csforge
