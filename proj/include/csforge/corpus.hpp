// include/csforge/corpus.hpp

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
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csforge/rng.hpp"

namespace csforge {

enum class Split { kTrain, kDev, kTest };

std::string_view to_string(Split split);

struct Utterance {
  std::string utt_id;
  std::string language;
  std::filesystem::path audio_path;  // resolved against the manifest dir
  std::string transcript;
  Split split = Split::kTrain;
  std::string sentence_id;
};

/// One sentence across languages; at most one utterance per language.
struct ParallelGroup {
  std::string sentence_id;
  std::map<std::string, Utterance> members;  // language -> utterance

  bool covers(std::string_view lang) const {
    return members.find(std::string(lang)) != members.end();
  }
};

/// Unordered language pair stored with lang_a < lang_b.
struct LanguagePair {
  std::string lang_a;
  std::string lang_b;

  /// Orders the two codes; throws InvalidArgument if they are equal.
  static LanguagePair make(std::string_view x, std::string_view y);
  /// Parses "en-nl" (either order).
  static LanguagePair parse(std::string_view spec);

  std::string str() const { return lang_a + "-" + lang_b; }

  auto operator<=>(const LanguagePair&) const = default;
};

struct MissingAudioRow {
  std::size_t line = 0;
  std::string utt_id;
  std::filesystem::path audio_path;
};

struct Corpus {
  std::vector<ParallelGroup> groups;  // sorted by sentence_id
  std::vector<MissingAudioRow> missing_audio;
  std::size_t singleton_groups = 0;   // sentence ids with one usable row
  std::vector<ParallelGroup> singletons;  // those groups, for partial counts
  std::size_t rows_outside_language_set = 0;

  std::set<std::string> languages() const;
};

struct ManifestOptions {
  std::set<std::string> languages;  // empty: accept every language
  bool check_audio = true;
};

/// True for two lowercase ASCII letters.
bool is_language_code(std::string_view code);

/// Reads a JSONL manifest. Malformed rows raise ManifestParseError naming
/// the line; rows whose audio file does not exist are collected in
/// `missing_audio` and left out of the groups.
Corpus load_manifest(const std::filesystem::path& path,
                     const ManifestOptions& options = {});

/// All unordered pairs, sorted. Throws TooFewLanguages below two languages.
std::vector<LanguagePair> enumerate_language_pairs(
    const std::set<std::string>& languages);

using UtterancePair = std::pair<Utterance, Utterance>;  // (lang_a, lang_b)

struct SampledPairs {
  std::vector<UtterancePair> pairs;
  std::size_t partial_groups = 0;  // groups holding only one of the two
};

/// One (lang_a, lang_b) utterance pair per group covering both languages,
/// shuffled by `rng`.
SampledPairs sample_equivalent_pairs(const Corpus& corpus,
                                     const LanguagePair& pair, Rng& rng);

}  // namespace csforge
