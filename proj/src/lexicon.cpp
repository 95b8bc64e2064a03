// src/lexicon.cpp

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

#include "csforge/lexicon.hpp"

#include <algorithm>
#include <fstream>

#include "csforge/error.hpp"
#include "csforge/text.hpp"

namespace csforge {

using nlohmann::json;

Lexicon Lexicon::load_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open lexicon " + path.string());
  Lexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (;;) {
      auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 3) {
      fail(ErrorCode::kConfigError, path.string() + ":" +
                                        std::to_string(line_no) +
                                        ": expected 3 tab-separated columns");
    }
    auto pos = parse_pos(cols[2]);
    if (!pos) {
      fail(ErrorCode::kConfigError, path.string() + ":" +
                                        std::to_string(line_no) +
                                        ": unknown POS '" + cols[2] + "'");
    }
    lex.add({cols[0], cols[1], *pos, {}, {}});
  }
  return lex;
}

void Lexicon::add(LexiconEntry entry) {
  entry.keys_a = text::token_keys(entry.token_a);
  entry.keys_b = text::token_keys(entry.token_b);
  entries_.push_back(std::move(entry));
}

LexiconMapper::LexiconMapper(std::filesystem::path path)
    : path_(std::move(path)) {
  if (!std::filesystem::is_directory(path_)) {
    single_ = std::make_shared<const Lexicon>(Lexicon::load_tsv(path_));
  }
}

LexiconMapper::LexiconMapper(Lexicon lexicon)
    : single_(std::make_shared<const Lexicon>(std::move(lexicon))) {}

std::shared_ptr<const Lexicon> LexiconMapper::lexicon_for(
    const std::string& lang_a, const std::string& lang_b, bool& swapped) {
  swapped = false;
  if (single_) return single_;
  swapped = lang_b < lang_a;
  const std::string key =
      swapped ? lang_b + "-" + lang_a : lang_a + "-" + lang_b;
  std::lock_guard lock(mu_);
  auto it = per_pair_.find(key);
  if (it != per_pair_.end()) return it->second;
  const auto file = path_ / (key + ".tsv");
  auto lex = std::filesystem::exists(file)
                 ? std::make_shared<const Lexicon>(Lexicon::load_tsv(file))
                 : std::make_shared<const Lexicon>();
  per_pair_.emplace(key, lex);
  return lex;
}

json LexiconMapper::map(const MappingRequest& request) {
  bool swapped = false;
  const auto lexicon = lexicon_for(request.lang_a, request.lang_b, swapped);
  const auto keys_a = text::token_keys(request.text_a);
  const auto keys_b = text::token_keys(request.text_b);
  const bool identity = keys_a == keys_b;

  struct Hit {
    std::size_t position;
    std::string a, b;
    POSCategory pos;
  };
  std::vector<Hit> hits;
  auto position_in = [](const std::vector<std::string>& keys,
                        const std::vector<std::string>& side)
      -> std::optional<std::size_t> {
    auto run = text::find_run(keys, side);
    if (!run) return std::nullopt;
    return run->first;
  };

  for (const auto& entry : lexicon->entries()) {
    const std::string& a = swapped ? entry.token_b : entry.token_a;
    const std::string& b = swapped ? entry.token_a : entry.token_b;
    const auto& side_keys_a = swapped ? entry.keys_b : entry.keys_a;
    const auto& side_keys_b = swapped ? entry.keys_a : entry.keys_b;
    if (identity) {
      if (auto p = position_in(keys_a, side_keys_a)) {
        hits.push_back({*p, a, a, entry.pos});
      }
      if (auto p = position_in(keys_a, side_keys_b)) {
        hits.push_back({*p, b, b, entry.pos});
      }
      continue;
    }
    auto pa = position_in(keys_a, side_keys_a);
    if (pa && position_in(keys_b, side_keys_b)) {
      hits.push_back({*pa, a, b, entry.pos});
    }
  }
  std::stable_sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) {
    return x.position < y.position;
  });

  json matches = json::object();
  for (auto pos : kAllPOS) matches[std::string(to_string(pos))] = json::array();
  for (const auto& h : hits) {
    matches[std::string(to_string(h.pos))].push_back(json::array({h.a, h.b}));
  }
  return json{{"matches", std::move(matches)}};
}

}  // namespace csforge
