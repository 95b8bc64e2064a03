// include/csforge/lexicon.hpp

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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "csforge/word_mapping.hpp"

namespace csforge {

struct LexiconEntry {
  std::string token_a;
  std::string token_b;
  POSCategory pos = POSCategory::kNoun;
  std::vector<std::string> keys_a, keys_b;  // filled in by Lexicon::add
};

/// Bilingual POS-tagged lexicon. TSV rows: lang_a_token, lang_b_token, pos.
/// Blank lines and lines starting with '#' are ignored.
class Lexicon {
 public:
  static Lexicon load_tsv(const std::filesystem::path& path);

  void add(LexiconEntry entry);
  const std::vector<LexiconEntry>& entries() const { return entries_; }

 private:
  std::vector<LexiconEntry> entries_;
};

/// Reference mapper: reports every lexicon entry whose two sides occur in
/// the two sentences, in a {"matches": ...} document. When both sentences
/// are identical, every lexicon word found in the sentence maps to itself.
///
/// A lexicon path may be a single TSV (used for every language pair, columns
/// in the request's lang_a/lang_b order) or a directory of "{a}-{b}.tsv"
/// files with a < b; directory files are loaded on first use.
class LexiconMapper final : public MapperBackend {
 public:
  explicit LexiconMapper(std::filesystem::path path);
  explicit LexiconMapper(Lexicon lexicon);

  nlohmann::json map(const MappingRequest& request) override;

 private:
  std::shared_ptr<const Lexicon> lexicon_for(const std::string& lang_a,
                                             const std::string& lang_b,
                                             bool& swapped);

  std::filesystem::path path_;
  std::shared_ptr<const Lexicon> single_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<const Lexicon>> per_pair_;
};

}  // namespace csforge
