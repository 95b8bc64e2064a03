// src/alignment.cpp

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

#include "csforge/alignment.hpp"

#include <algorithm>

#include "csforge/error.hpp"
#include "csforge/romanize.hpp"
#include "csforge/text.hpp"

namespace csforge {

using nlohmann::json;

AlignerOutput UniformAligner::align_tokens(const AudioBuffer& audio,
                                           std::span<const std::string> tokens,
                                           std::string_view lang,
                                           bool romanized) {
  std::vector<double> weights;
  weights.reserve(tokens.size());
  double total = 0.0;
  for (const auto& token : tokens) {
    const std::size_t chars =
        romanized ? token.size() : romanize(token, lang).text.size();
    weights.push_back(static_cast<double>(std::max<std::size_t>(chars, 1)));
    total += weights.back();
  }
  const double duration = audio.duration_seconds();
  AlignerOutput out;
  double cum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double start = cum / total * duration;
    cum += weights[i];
    const double end = i + 1 == weights.size() ? duration : cum / total * duration;
    out.spans.push_back({start, end});
  }
  return out;
}

json make_align_request(const AudioBuffer& audio,
                        std::span<const std::string> tokens,
                        std::string_view lang, bool romanized) {
  return json{{"kind", "align"},
              {"sample_rate", audio.sample_rate()},
              {"audio_b64", protocol::encode_audio(audio)},
              {"tokens", std::vector<std::string>(tokens.begin(), tokens.end())},
              {"lang", lang},
              {"romanized", romanized}};
}

json make_align_response(const AlignerOutput& out) {
  json spans = json::array();
  for (const auto& s : out.spans) spans.push_back(json::array({s.start_s, s.end_s}));
  return json{{"spans", std::move(spans)}, {"scores", out.scores}};
}

AlignerOutput parse_align_response(const json& response) {
  protocol::check_response(response);
  auto it = response.find("spans");
  if (it == response.end() || !it->is_array()) {
    fail(ErrorCode::kBackendMalformedResponse, "align response has no spans");
  }
  AlignerOutput out;
  for (const auto& s : *it) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_number() ||
        !s[1].is_number()) {
      fail(ErrorCode::kBackendMalformedResponse,
           "align span is not [start_s, end_s]");
    }
    out.spans.push_back({s[0].get<double>(), s[1].get<double>()});
  }
  if (auto sc = response.find("scores"); sc != response.end() && !sc->is_null()) {
    if (!sc->is_array()) {
      fail(ErrorCode::kBackendMalformedResponse, "scores is not an array");
    }
    for (const auto& v : *sc) {
      if (!v.is_number()) {
        fail(ErrorCode::kBackendMalformedResponse, "score is not a number");
      }
      out.scores.push_back(v.get<double>());
    }
  }
  return out;
}

AlignerOutput ProtocolAligner::align_tokens(const AudioBuffer& audio,
                                            std::span<const std::string> tokens,
                                            std::string_view lang,
                                            bool romanized) {
  return parse_align_response(
      channel_->exchange(make_align_request(audio, tokens, lang, romanized)));
}

std::vector<WordAlignment> align(AlignerBackend& backend,
                                 const AudioBuffer& audio,
                                 std::string_view transcript,
                                 std::string_view lang) {
  const auto tokens = text::token_surfaces(transcript);
  if (tokens.empty()) {
    fail(ErrorCode::kAlignmentFailed, "transcript has no tokens");
  }
  const bool romanized = backend.requires_romanized();
  std::vector<std::string> dispatched;
  dispatched.reserve(tokens.size());
  for (const auto& t : tokens) {
    dispatched.push_back(romanized ? romanize(t, lang).text : t);
  }

  const AlignerOutput out =
      backend.align_tokens(audio, dispatched, lang, romanized);
  if (out.spans.size() != tokens.size()) {
    fail(ErrorCode::kAlignmentFailed,
         "aligner returned " + std::to_string(out.spans.size()) +
             " spans for " + std::to_string(tokens.size()) + " tokens");
  }
  if (!out.scores.empty() && out.scores.size() != tokens.size()) {
    fail(ErrorCode::kAlignmentFailed,
         "aligner returned " + std::to_string(out.scores.size()) +
             " scores for " + std::to_string(tokens.size()) + " tokens");
  }

  const double duration = audio.duration_seconds();
  const double slack = 0.5 / audio.sample_rate();
  std::vector<WordAlignment> result;
  result.reserve(tokens.size());
  double previous_end = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    TimeSpan span = out.spans[i];
    if (!(span.start_s >= 0.0) || !(span.end_s >= span.start_s) ||
        span.start_s + slack < previous_end || span.end_s > duration + slack) {
      fail(ErrorCode::kAlignmentFailed,
           "span " + std::to_string(i) + " [" + std::to_string(span.start_s) +
               ", " + std::to_string(span.end_s) +
               "] breaks monotonicity or exceeds " + std::to_string(duration) +
               " s");
    }
    span.start_s = std::max(span.start_s, previous_end);
    span.end_s = std::min(std::max(span.end_s, span.start_s), duration);
    previous_end = span.end_s;
    const double score =
        out.scores.empty() ? 1.0 : std::clamp(out.scores[i], 0.0, 1.0);
    result.push_back({tokens[i], span, score});
  }
  return result;
}

std::optional<std::pair<std::size_t, std::size_t>> locate_tokens(
    std::span<const WordAlignment> alignments, std::string_view side) {
  std::vector<std::string> keys;
  keys.reserve(alignments.size());
  for (const auto& a : alignments) keys.push_back(text::fold_key(a.word));
  return text::find_run(keys, text::token_keys(side));
}

TimeSpan locate_word(std::span<const WordAlignment> alignments,
                     std::string_view side) {
  auto run = locate_tokens(alignments, side);
  if (!run) {
    fail(ErrorCode::kWordNotAligned,
         "'" + std::string(side) + "' does not occur in the alignment");
  }
  return {alignments[run->first].span.start_s,
          alignments[run->second - 1].span.end_s};
}

}  // namespace csforge
