// include/csforge/swords.hpp

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

// Intra-sentential code-switch generation: pick a matrix language, draw
// word pairs, locate both sides in the aligned utterances, substitute the
// text and splice the audio from one shared survivor set.

#include <cstddef>
#include <cstdint>
#include <json.hpp>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csforge/alignment.hpp"
#include "csforge/audio.hpp"
#include "csforge/corpus.hpp"
#include "csforge/rng.hpp"
#include "csforge/word_mapping.hpp"

namespace csforge {

enum class MatrixPolicy { kRandom, kFixedA, kFixedB };

std::string_view to_string(MatrixPolicy policy);
/// "random", "fixed_a", "fixed_b"; throws InvalidArgument otherwise.
MatrixPolicy parse_matrix_policy(std::string_view s);

struct GenerationParams {
  int n_max = 3;
  POSSet pos_pool{POSCategory::kNoun, POSCategory::kVerb,
                  POSCategory::kInterjection};
  MatrixPolicy matrix_policy = MatrixPolicy::kRandom;
  double crossfade_ms = 0.0;
  std::uint64_t seed = 0;
};

struct Substitution {
  WordPair pair;
  TimeSpan matrix_span;    // in the matrix utterance
  TimeSpan embedded_span;  // in the embedded utterance
};

struct CSRecord {
  std::string record_id;
  std::string sentence_id;
  std::string matrix_lang;
  std::string embedded_lang;
  std::string cs_text;
  std::string audio_path;  // relative to the output directory
  std::vector<Substitution> substitutions;
  double cmi = 0.0;
  double i_index = 0.0;
  std::vector<std::string> token_langs;  // one per cs_text token
  double duration_s = 0.0;
  std::vector<std::string> flags;

  /// Manifest line object, keys in a fixed order.
  nlohmann::ordered_json to_json() const;
  /// Throws InvalidArgument on a malformed object.
  static CSRecord from_json(const nlohmann::json& j);
};

/// "{sentence_id}_{matrix}{embedded}"
std::string make_record_id(std::string_view sentence_id,
                           std::string_view matrix_lang,
                           std::string_view embedded_lang);

/// Per-record stream seed: independent of batch composition and scheduling.
std::uint64_t record_seed(std::uint64_t seed, std::string_view sentence_id,
                          const LanguagePair& pair);

enum class TokenOrigin { kMatrix, kEmbedded };

struct TextSubstitution {
  std::string cs_text;
  std::vector<TokenOrigin> origins;  // one per cs_text token
};

/// Replaces the first occurrence of each pair's matrix side with its
/// embedded side. Tokens are rejoined with single spaces; punctuation inside
/// the sentence is dropped while the sentence's own leading and trailing
/// punctuation is kept. An empty substitution list returns the transcript
/// unchanged. Throws SubstitutionMiss when a matrix side does not
/// occur or two substitutions claim the same token.
TextSubstitution substitute_text(std::string_view txt_matrix,
                                 std::span<const WordPair> substitutions,
                                 bool matrix_is_side_a);

struct SourceUtterance {
  const Utterance& utterance;
  const AudioBuffer& audio;  // preprocessed
  std::span<const WordAlignment> alignments;
};

struct GeneratedSample {
  AudioBuffer audio;
  CSRecord record;  // audio_path left empty
  std::size_t dropped_pairs = 0;  // not located or overlapping
};

/// `a` and `b` are the lang_a / lang_b sides that `map` was built from.
/// Throws NoEligiblePairs, WordNotAligned (every drawn pair dropped),
/// SubstitutionMiss or RateMismatch.
GeneratedSample generate_cs_sample(const SourceUtterance& a,
                                   const SourceUtterance& b,
                                   const WordPairMap& map,
                                   const GenerationParams& params, Rng& rng);

}  // namespace csforge
