// include/csforge/word_mapping.hpp

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

#include <array>
#include <cstddef>
#include <initializer_list>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csforge/backend.hpp"
#include "csforge/rng.hpp"

namespace csforge {

enum class POSCategory { kNoun, kVerb, kAdverb, kAdjective, kInterjection };

inline constexpr std::array<POSCategory, 5> kAllPOS = {
    POSCategory::kNoun, POSCategory::kVerb, POSCategory::kAdverb,
    POSCategory::kAdjective, POSCategory::kInterjection};

std::string_view to_string(POSCategory pos);
/// Exact, lowercase tag names only.
std::optional<POSCategory> parse_pos(std::string_view tag);

/// Small bit set over the five categories.
class POSSet {
 public:
  POSSet() = default;
  POSSet(std::initializer_list<POSCategory> items) {
    for (auto p : items) insert(p);
  }
  void insert(POSCategory p) { bits_ |= bit(p); }
  bool contains(POSCategory p) const { return (bits_ & bit(p)) != 0; }
  bool empty() const { return bits_ == 0; }
  bool operator==(const POSSet&) const = default;

  /// "noun,verb,interjection"; throws InvalidArgument on unknown tags.
  static POSSet parse_list(std::string_view csv);
  std::string str() const;

 private:
  static unsigned bit(POSCategory p) { return 1u << static_cast<unsigned>(p); }
  unsigned bits_ = 0;
};

struct WordPair {
  std::string side_a;  // language lang_a, 1..k tokens
  std::string side_b;  // language lang_b
  POSCategory pos = POSCategory::kNoun;

  bool operator==(const WordPair&) const = default;
};

/// Always holds all five categories (possibly empty).
class WordPairMap {
 public:
  std::vector<WordPair>& operator[](POSCategory p) {
    return lists_[static_cast<std::size_t>(p)];
  }
  const std::vector<WordPair>& operator[](POSCategory p) const {
    return lists_[static_cast<std::size_t>(p)];
  }
  std::size_t total() const;

  /// {"matches": {"noun": [[a, b], ...], ...}} with every key present.
  nlohmann::json to_json() const;

  bool operator==(const WordPairMap&) const = default;

 private:
  std::array<std::vector<WordPair>, 5> lists_;
};

struct MappingPrompts {
  std::string role;
  std::string format;
  std::string user;
};

/// YAML skeleton the formatting prompt asks the model to follow.
std::string_view mapping_output_format();

/// English name for an ISO-639-1 code where known, else the code itself.
std::string language_name(std::string_view code);

/// Two system prompts and the user prompt of the mapping request.
MappingPrompts build_mapping_prompts(std::string_view lang_a,
                                     std::string_view lang_b,
                                     std::string_view text_a,
                                     std::string_view text_b);

struct MappingRequest {
  std::string lang_a, lang_b;
  std::string text_a, text_b;
  MappingPrompts prompts;

  nlohmann::json to_json() const;  // kind = "word_map"
  static MappingRequest from_json(const nlohmann::json& j);
};

class MapperBackend {
 public:
  virtual ~MapperBackend() = default;
  /// The raw response document, untouched.
  virtual nlohmann::json map(const MappingRequest& request) = 0;
};

/// Mapper reached through the JSON protocol.
class ProtocolMapper final : public MapperBackend {
 public:
  explicit ProtocolMapper(std::unique_ptr<JsonChannel> channel)
      : channel_(std::move(channel)) {}
  nlohmann::json map(const MappingRequest& request) override;

 private:
  std::unique_ptr<JsonChannel> channel_;
};

/// Builds the request (prompts included) and returns the raw document.
nlohmann::json request_mapping(MapperBackend& backend,
                               std::string_view lang_a, std::string_view lang_b,
                               std::string_view text_a, std::string_view text_b);

struct MappingDrops {
  std::size_t unpaired = 0;          // entries that are not two-element pairs
  std::size_t non_text = 0;          // pair members that are not strings
  std::size_t not_in_transcript = 0;
  std::size_t unknown_pos = 0;       // whole lists under unrecognized keys
  std::size_t duplicates = 0;
  std::size_t missing_keys = 0;      // keys inserted empty

  std::size_t total_dropped() const {
    return unpaired + non_text + not_in_transcript + duplicates;
  }
};

struct PostprocessResult {
  WordPairMap map;
  MappingDrops drops;
};

/// Turns a raw mapper document into a valid WordPairMap.
///
/// Accepts the {"matches": {...}} envelope or its bare contents, POS lists
/// given as pair sequences (arbitrarily nested, as the YAML "- [[a, b]]"
/// shape produces), key/value mappings or {"a":..,"b":..}-style objects.
/// Each side is matched against its transcript case-insensitively with edge
/// punctuation stripped and rewritten to the transcript's own surface form
/// at the first occurrence. Pairs sharing a side with an earlier pair of the
/// same category are dropped as duplicates. Throws UnparsableDocument when
/// the document is not an object (or a string holding one).
PostprocessResult postprocess_mapping(const nlohmann::json& raw,
                                      std::string_view text_a,
                                      std::string_view text_b);

/// Draws k uniformly from 1..n_max, then min(k, eligible) pairs without
/// replacement from the categories in `pool`. Returned in map order.
std::vector<WordPair> select_substitutions(const WordPairMap& map, int n_max,
                                           const POSSet& pool, Rng& rng);

}  // namespace csforge
