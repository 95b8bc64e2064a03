// src/word_mapping.cpp

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

#include "csforge/word_mapping.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <set>

#include "csforge/error.hpp"
#include "csforge/text.hpp"

namespace csforge {

using nlohmann::json;

std::string_view to_string(POSCategory pos) {
  switch (pos) {
    case POSCategory::kNoun: return "noun";
    case POSCategory::kVerb: return "verb";
    case POSCategory::kAdverb: return "adverb";
    case POSCategory::kAdjective: return "adjective";
    case POSCategory::kInterjection: return "interjection";
  }
  return "noun";
}

std::optional<POSCategory> parse_pos(std::string_view tag) {
  for (auto p : kAllPOS) {
    if (to_string(p) == tag) return p;
  }
  return std::nullopt;
}

POSSet POSSet::parse_list(std::string_view csv) {
  POSSet set;
  while (!csv.empty()) {
    auto comma = csv.find(',');
    auto item = csv.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      auto pos = parse_pos(item);
      if (!pos) {
        fail(ErrorCode::kInvalidArgument,
             "unknown POS category '" + std::string(item) + "'");
      }
      set.insert(*pos);
    }
    if (comma == std::string_view::npos) break;
    csv.remove_prefix(comma + 1);
  }
  return set;
}

std::string POSSet::str() const {
  std::string out;
  for (auto p : kAllPOS) {
    if (!contains(p)) continue;
    if (!out.empty()) out += ',';
    out += to_string(p);
  }
  return out;
}

std::size_t WordPairMap::total() const {
  std::size_t n = 0;
  for (const auto& list : lists_) n += list.size();
  return n;
}

json WordPairMap::to_json() const {
  json matches = json::object();
  for (auto p : kAllPOS) {
    json list = json::array();
    for (const auto& pair : (*this)[p]) {
      list.push_back(json::array({pair.side_a, pair.side_b}));
    }
    matches[std::string(to_string(p))] = std::move(list);
  }
  return json{{"matches", std::move(matches)}};
}

std::string_view mapping_output_format() {
  return "matches:\n"
         "    noun:\n"
         "        - [[n1, n2]]\n"
         "    verb:\n"
         "        - [[v1, v2]]\n"
         "    adverb:\n"
         "        - [[a1, a2]]\n"
         "    adjective:\n"
         "        - [[a'1, a'2]]\n"
         "    interjection:\n"
         "        - [[i1, i2]]";
}

std::string language_name(std::string_view code) {
  static const std::map<std::string_view, std::string_view> kNames = {
      {"bg", "Bulgarian"},  {"cs", "Czech"},      {"da", "Danish"},
      {"de", "German"},     {"el", "Greek"},      {"en", "English"},
      {"es", "Spanish"},    {"et", "Estonian"},   {"fi", "Finnish"},
      {"fr", "French"},     {"hr", "Croatian"},   {"hu", "Hungarian"},
      {"it", "Italian"},    {"lt", "Lithuanian"}, {"lv", "Latvian"},
      {"mt", "Maltese"},    {"nl", "Dutch"},      {"pl", "Polish"},
      {"pt", "Portuguese"}, {"ro", "Romanian"},   {"sk", "Slovak"},
      {"sl", "Slovenian"},  {"sv", "Swedish"},    {"ru", "Russian"},
      {"uk", "Ukrainian"},  {"tr", "Turkish"},    {"ca", "Catalan"},
  };
  auto it = kNames.find(code);
  return std::string(it == kNames.end() ? code : it->second);
}

MappingPrompts build_mapping_prompts(std::string_view lang_a,
                                     std::string_view lang_b,
                                     std::string_view text_a,
                                     std::string_view text_b) {
  const std::string name_a = language_name(lang_a);
  const std::string name_b = language_name(lang_b);
  MappingPrompts p;
  p.role = "You are a language expert specializing in " + name_a + " and " +
           name_b + ".";
  p.format =
      "The final outputs must be returned in YAML format, and each component "
      "in part of speech is a list of words with the same meaning. The YAML "
      "file structure must strictly adhere to the following format: " +
      std::string(mapping_output_format());
  p.user =
      "Find pairs of words with the same meaning and sort it with the part of "
      "speech information in the given two sentences from different "
      "languages. " +
      name_a + " sentence: " + std::string(text_a) + ", " + name_b +
      " sentence: " + std::string(text_b);
  return p;
}

json MappingRequest::to_json() const {
  return json{{"kind", "word_map"},          {"lang_a", lang_a},
              {"lang_b", lang_b},            {"text_a", text_a},
              {"text_b", text_b},            {"prompt_role", prompts.role},
              {"prompt_format", prompts.format}, {"prompt_user", prompts.user}};
}

MappingRequest MappingRequest::from_json(const json& j) {
  MappingRequest r;
  try {
    r.lang_a = j.at("lang_a").get<std::string>();
    r.lang_b = j.at("lang_b").get<std::string>();
    r.text_a = j.at("text_a").get<std::string>();
    r.text_b = j.at("text_b").get<std::string>();
    r.prompts.role = j.value("prompt_role", "");
    r.prompts.format = j.value("prompt_format", "");
    r.prompts.user = j.value("prompt_user", "");
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument,
         std::string("malformed word_map request: ") + e.what());
  }
  return r;
}

json ProtocolMapper::map(const MappingRequest& request) {
  json response = channel_->exchange(request.to_json());
  protocol::check_response(response);
  return response;
}

json request_mapping(MapperBackend& backend, std::string_view lang_a,
                     std::string_view lang_b, std::string_view text_a,
                     std::string_view text_b) {
  MappingRequest request;
  request.lang_a = std::string(lang_a);
  request.lang_b = std::string(lang_b);
  request.text_a = std::string(text_a);
  request.text_b = std::string(text_b);
  request.prompts = build_mapping_prompts(lang_a, lang_b, text_a, text_b);
  return backend.map(request);
}

namespace {

// Keys name both sides of one pair when a mapper emits pairs as objects.
bool is_role_key(const std::string& k) {
  static const std::set<std::string> kRoles = {
      "a", "b", "source", "target", "src", "tgt", "lang1", "lang2",
      "word1", "word2", "first", "second", "0", "1", "left", "right"};
  return kRoles.count(k) > 0;
}

std::optional<POSCategory> parse_pos_key(std::string key) {
  key = text::to_lower(key);
  while (!key.empty() && (key.front() == ' ' || key.front() == '_')) key.erase(0, 1);
  while (!key.empty() && (key.back() == ' ' || key.back() == '_')) key.pop_back();
  if (auto p = parse_pos(key)) return p;
  if (key.size() > 1 && key.back() == 's') {
    key.pop_back();
    if (auto p = parse_pos(key)) return p;
  }
  return std::nullopt;
}

bool is_scalar(const json& j) { return !j.is_array() && !j.is_object(); }

using Candidate = std::vector<json>;

void collect_candidates(const json& value, std::vector<Candidate>& out,
                        MappingDrops& drops) {
  if (value.is_null()) return;
  if (value.is_array()) {
    if (value.empty()) return;
    if (std::all_of(value.begin(), value.end(), is_scalar)) {
      out.emplace_back(value.begin(), value.end());
      return;
    }
    for (const auto& item : value) {
      if (is_scalar(item)) {
        if (!item.is_null()) ++drops.unpaired;
      } else {
        collect_candidates(item, out, drops);
      }
    }
    return;
  }
  if (value.is_object()) {
    if (value.size() == 2) {
      bool roles = true, strings = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        roles = roles && is_role_key(text::to_lower(it.key()));
        strings = strings && is_scalar(it.value());
      }
      if (roles && strings) {
        Candidate c;
        for (auto it = value.begin(); it != value.end(); ++it) {
          c.push_back(it.value());
        }
        // Key-sorted iteration already puts a/source/first/... before
        // b/target/second/...
        out.push_back(std::move(c));
        return;
      }
    }
    for (auto it = value.begin(); it != value.end(); ++it) {
      if (is_scalar(it.value())) {
        out.push_back(Candidate{json(it.key()), it.value()});
      } else {
        ++drops.unpaired;
      }
    }
    return;
  }
  if (value.is_string()) {
    ++drops.unpaired;
  } else {
    ++drops.non_text;
  }
}

json unwrap_document(const json& raw) {
  json doc = raw;
  if (doc.is_string()) {
    try {
      doc = json::parse(doc.get<std::string>());
    } catch (const json::parse_error&) {
      fail(ErrorCode::kUnparsableDocument,
           "mapping response is a string that does not hold JSON");
    }
  }
  if (!doc.is_object()) {
    fail(ErrorCode::kUnparsableDocument, "mapping response is not an object");
  }
  json matches = doc.contains("matches") ? doc["matches"] : doc;
  if (matches.is_string()) {
    try {
      matches = json::parse(matches.get<std::string>());
    } catch (const json::parse_error&) {
      fail(ErrorCode::kUnparsableDocument,
           "'matches' is a string that does not hold JSON");
    }
  }
  if (matches.is_array()) {
    // [{"noun": [...]}, {"verb": [...]}] -> one object
    json merged = json::object();
    for (const auto& item : matches) {
      if (!item.is_object()) {
        fail(ErrorCode::kUnparsableDocument,
             "'matches' array holds a non-object");
      }
      for (auto it = item.begin(); it != item.end(); ++it) {
        merged[it.key()] = it.value();
      }
    }
    matches = std::move(merged);
  }
  if (matches.is_null()) matches = json::object();
  if (!matches.is_object()) {
    fail(ErrorCode::kUnparsableDocument, "'matches' is not an object");
  }
  return matches;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

struct TranscriptIndex {
  std::vector<text::Token> tokens;
  std::vector<std::string> keys;

  explicit TranscriptIndex(std::string_view text)
      : tokens(text::tokenize(text)) {
    for (const auto& t : tokens) keys.push_back(t.key);
  }

  // Surface form of the first occurrence of `side`, or nullopt.
  std::optional<std::string> canonical(const std::string& side) const {
    const auto needle = text::token_keys(side);
    auto run = text::find_run(keys, needle);
    if (!run) return std::nullopt;
    std::string out;
    for (std::size_t i = run->first; i < run->second; ++i) {
      if (!out.empty()) out += ' ';
      out += tokens[i].surface;
    }
    return out;
  }
};

}  // namespace

PostprocessResult postprocess_mapping(const json& raw, std::string_view text_a,
                                      std::string_view text_b) {
  const json matches = unwrap_document(raw);
  PostprocessResult result;
  auto& drops = result.drops;

  std::map<POSCategory, std::vector<Candidate>> by_pos;
  std::set<POSCategory> seen_keys;
  for (auto it = matches.begin(); it != matches.end(); ++it) {
    auto pos = parse_pos_key(it.key());
    if (!pos) {
      ++drops.unknown_pos;
      continue;
    }
    seen_keys.insert(*pos);
    collect_candidates(it.value(), by_pos[*pos], drops);
  }
  drops.missing_keys = kAllPOS.size() - seen_keys.size();

  const TranscriptIndex index_a(text_a), index_b(text_b);
  for (auto pos : kAllPOS) {
    auto& out = result.map[pos];
    std::set<std::string> seen_a, seen_b;
    for (const auto& cand : by_pos[pos]) {
      if (cand.size() != 2) {
        ++drops.unpaired;
        continue;
      }
      if (!cand[0].is_string() || !cand[1].is_string()) {
        ++drops.non_text;
        continue;
      }
      auto side_a = index_a.canonical(trim(cand[0].get<std::string>()));
      auto side_b = index_b.canonical(trim(cand[1].get<std::string>()));
      if (!side_a || !side_b) {
        ++drops.not_in_transcript;
        continue;
      }
      const auto key_a = text::fold_key(*side_a);
      const auto key_b = text::fold_key(*side_b);
      if (seen_a.count(key_a) || seen_b.count(key_b)) {
        ++drops.duplicates;
        continue;
      }
      seen_a.insert(key_a);
      seen_b.insert(key_b);
      out.push_back(WordPair{std::move(*side_a), std::move(*side_b), pos});
    }
  }
  return result;
}

std::vector<WordPair> select_substitutions(const WordPairMap& map, int n_max,
                                           const POSSet& pool, Rng& rng) {
  if (n_max < 1) fail(ErrorCode::kInvalidArgument, "n_max must be >= 1");
  if (pool.empty()) fail(ErrorCode::kInvalidArgument, "empty POS pool");
  std::vector<WordPair> eligible;
  for (auto pos : kAllPOS) {
    if (!pool.contains(pos)) continue;
    const auto& list = map[pos];
    eligible.insert(eligible.end(), list.begin(), list.end());
  }
  if (eligible.empty()) return {};
  std::uniform_int_distribution<int> count(1, n_max);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(count(rng)),
                                       eligible.size());
  std::vector<WordPair> chosen;
  chosen.reserve(k);
  std::sample(eligible.begin(), eligible.end(), std::back_inserter(chosen), k,
              rng);
  return chosen;
}

}  // namespace csforge
