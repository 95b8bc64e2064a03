// src/corpus.cpp

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

#include "csforge/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <unordered_set>

#include "csforge/error.hpp"

namespace csforge {

namespace {

using nlohmann::json;

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  fail(ErrorCode::kManifestParseError,
       "line " + std::to_string(line) + ": " + what);
}

std::string required_string(const json& row, const char* key,
                            std::size_t line) {
  auto it = row.find(key);
  if (it == row.end()) parse_error(line, std::string("missing key '") + key + "'");
  if (!it->is_string()) {
    parse_error(line, std::string("key '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

Split parse_split(const std::string& s, std::size_t line) {
  if (s == "train") return Split::kTrain;
  if (s == "dev") return Split::kDev;
  if (s == "test") return Split::kTest;
  parse_error(line, "unknown split '" + s + "'");
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  });
}

}  // namespace

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "train";
}

bool is_language_code(std::string_view code) {
  return code.size() == 2 && std::all_of(code.begin(), code.end(), [](char c) {
           return c >= 'a' && c <= 'z';
         });
}

LanguagePair LanguagePair::make(std::string_view x, std::string_view y) {
  if (x == y) {
    fail(ErrorCode::kInvalidArgument,
         "language pair needs two distinct languages, got '" + std::string(x) +
             "' twice");
  }
  if (y < x) std::swap(x, y);
  return LanguagePair{std::string(x), std::string(y)};
}

LanguagePair LanguagePair::parse(std::string_view spec) {
  const auto dash = spec.find('-');
  if (dash == std::string_view::npos) {
    fail(ErrorCode::kInvalidArgument,
         "language pair '" + std::string(spec) + "' is not of the form xx-yy");
  }
  auto a = spec.substr(0, dash), b = spec.substr(dash + 1);
  if (!is_language_code(a) || !is_language_code(b)) {
    fail(ErrorCode::kInvalidArgument,
         "language pair '" + std::string(spec) + "' is not of the form xx-yy");
  }
  return make(a, b);
}

std::set<std::string> Corpus::languages() const {
  std::set<std::string> out;
  for (const auto& g : groups) {
    for (const auto& [lang, _] : g.members) out.insert(lang);
  }
  return out;
}

Corpus load_manifest(const std::filesystem::path& path,
                     const ManifestOptions& options) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open manifest " + path.string());
  const auto base_dir = path.parent_path();

  Corpus corpus;
  std::map<std::string, ParallelGroup> groups;
  std::unordered_set<std::string> utt_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      parse_error(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!row.is_object()) parse_error(line_no, "row is not a JSON object");

    Utterance utt;
    utt.sentence_id = required_string(row, "sentence_id", line_no);
    utt.utt_id = required_string(row, "utt_id", line_no);
    utt.language = required_string(row, "language", line_no);
    const auto audio = required_string(row, "audio_path", line_no);
    utt.transcript = required_string(row, "transcript", line_no);
    utt.split = parse_split(required_string(row, "split", line_no), line_no);

    if (utt.sentence_id.empty()) parse_error(line_no, "empty sentence_id");
    if (utt.utt_id.empty()) parse_error(line_no, "empty utt_id");
    if (!is_language_code(utt.language)) {
      parse_error(line_no, "language '" + utt.language +
                               "' is not an ISO-639-1 code");
    }
    if (blank(utt.transcript)) parse_error(line_no, "empty transcript");
    if (audio.empty()) parse_error(line_no, "empty audio_path");
    if (!utt_ids.insert(utt.utt_id).second) {
      parse_error(line_no, "duplicate utt_id '" + utt.utt_id + "'");
    }

    if (!options.languages.empty() &&
        options.languages.count(utt.language) == 0) {
      ++corpus.rows_outside_language_set;
      continue;
    }

    std::filesystem::path audio_path(audio);
    if (audio_path.is_relative()) audio_path = base_dir / audio_path;
    utt.audio_path = audio_path.lexically_normal();

    if (options.check_audio && !std::filesystem::is_regular_file(utt.audio_path)) {
      corpus.missing_audio.push_back({line_no, utt.utt_id, utt.audio_path});
      continue;
    }

    auto& group = groups[utt.sentence_id];
    group.sentence_id = utt.sentence_id;
    if (group.covers(utt.language)) {
      parse_error(line_no, "second '" + utt.language +
                               "' utterance for sentence '" + utt.sentence_id +
                               "'");
    }
    const auto lang = utt.language;
    group.members.emplace(lang, std::move(utt));
  }
  if (in.bad()) fail(ErrorCode::kIoError, "read failed for " + path.string());

  for (auto& [_, group] : groups) {
    if (group.members.size() < 2) {
      ++corpus.singleton_groups;
      corpus.singletons.push_back(std::move(group));
      continue;
    }
    corpus.groups.push_back(std::move(group));
  }
  return corpus;
}

std::vector<LanguagePair> enumerate_language_pairs(
    const std::set<std::string>& languages) {
  if (languages.size() < 2) {
    fail(ErrorCode::kTooFewLanguages,
         "need at least 2 languages, got " + std::to_string(languages.size()));
  }
  std::vector<LanguagePair> pairs;
  pairs.reserve(languages.size() * (languages.size() - 1) / 2);
  for (auto a = languages.begin(); a != languages.end(); ++a) {
    for (auto b = std::next(a); b != languages.end(); ++b) {
      pairs.push_back(LanguagePair{*a, *b});
    }
  }
  return pairs;
}

SampledPairs sample_equivalent_pairs(const Corpus& corpus,
                                     const LanguagePair& pair, Rng& rng) {
  SampledPairs out;
  for (const auto& group : corpus.groups) {
    const bool has_a = group.covers(pair.lang_a);
    const bool has_b = group.covers(pair.lang_b);
    if (has_a && has_b) {
      out.pairs.emplace_back(group.members.at(pair.lang_a),
                             group.members.at(pair.lang_b));
    } else if (has_a || has_b) {
      ++out.partial_groups;
    }
  }
  for (const auto& group : corpus.singletons) {
    if (group.covers(pair.lang_a) || group.covers(pair.lang_b)) ++out.partial_groups;
  }
  std::shuffle(out.pairs.begin(), out.pairs.end(), rng);
  return out;
}

}  // namespace csforge
