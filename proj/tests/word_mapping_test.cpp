// tests/word_mapping_test.cpp

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <json.hpp>

#include "csforge/error.hpp"
#include "csforge/lexicon.hpp"
#include "csforge/text.hpp"
#include "csforge/word_mapping.hpp"
#include "fixture.hpp"
#include "fixture.hpp"

using namespace csforge;
using nlohmann::json;

namespace {

const char* kEn =
    "Hiking is an outdoor activity which consists of walking in natural "
    "environments, often on hiking trails.";
const char* kNl =
    "Wandelen is een buitenactiviteit waarbij je in een natuurlijke omgeving "
    "wandelt, meestal op wandelpaden.";

std::string lexicon_path() { return std::string(CSFORGE_TEST_DATA) + "/hiking/en-nl.tsv"; }

}  // namespace

TEST_CASE("POS tags parse from a closed set") {
  CHECK(parse_pos("noun") == POSCategory::kNoun);
  CHECK(parse_pos("interjection") == POSCategory::kInterjection);
  CHECK_FALSE(parse_pos("pronoun"));
  CHECK(POSSet::parse_list("noun, verb,interjection") ==
        POSSet{POSCategory::kNoun, POSCategory::kVerb, POSCategory::kInterjection});
  CHECK_THROWS_AS(POSSet::parse_list("noun,article"), Error);
}

TEST_CASE("prompts follow the mapping templates") {
  const auto p = build_mapping_prompts("en", "nl", "a b", "c d");
  CHECK(p.role == "You are a language expert specializing in English and Dutch.");
  CHECK(p.format.find("YAML") != std::string::npos);
  CHECK(p.format.find(std::string(mapping_output_format())) != std::string::npos);
  CHECK(p.user ==
        "Find pairs of words with the same meaning and sort it with the part of "
        "speech information in the given two sentences from different languages. "
        "English sentence: a b, Dutch sentence: c d");
  MappingRequest r{"en", "nl", "a b", "c d", p};
  const json j = r.to_json();
  CHECK(j["kind"] == "word_map");
  CHECK(j["prompt_user"] == p.user);
  CHECK(MappingRequest::from_json(j).to_json() == j);
}

TEST_CASE("lexicon mapper finds the hiking pair") {
  LexiconMapper mapper{std::filesystem::path(lexicon_path())};
  const json doc = request_mapping(mapper, "en", "nl", kEn, kNl);
  const auto& nouns = doc["matches"]["noun"];
  CHECK(std::find(nouns.begin(), nouns.end(), json::array({"hiking", "wandelen"})) !=
        nouns.end());
  CHECK(std::find(nouns.begin(), nouns.end(),
                  json::array({"hiking trails", "wandelpaden"})) != nouns.end());
  for (const char* k : {"noun", "verb", "adverb", "adjective", "interjection"}) {
    CHECK(doc["matches"].contains(k));
  }
  // a directory lexicon is keyed by sorted pair; reversed requests swap columns
  const auto dir = testing::scratch_dir("word_mapping_lexdir");
  std::filesystem::copy_file(lexicon_path(), dir / "en-nl.tsv");
  LexiconMapper by_pair{dir};
  const json rev = request_mapping(by_pair, "nl", "en", kNl, kEn);
  REQUIRE(rev["matches"]["noun"].size() == 2);
  CHECK(rev["matches"]["noun"][0] == json::array({"wandelen", "hiking"}));
}

TEST_CASE("identical sentences map words to themselves") {
  LexiconMapper mapper{std::filesystem::path(lexicon_path())};
  const json doc = request_mapping(mapper, "en", "nl", kEn, kEn);
  const auto pp = postprocess_mapping(doc, kEn, kEn);
  REQUIRE(pp.map.total() >= 1);
  for (auto pos : kAllPOS) {
    for (const auto& p : pp.map[pos]) CHECK(p.side_a == p.side_b);
  }
}

TEST_CASE("postprocess canonicalizes and enforces the transcript invariant") {
  const json raw = {{"matches",
                     {{"noun", json::array({json::array({"hiking", "wandelen"}),
                                            json::array({"castle", "kasteel"}),
                                            json::array({"HIKING TRAILS", "Wandelpaden"})})},
                      {"verb", json::array()}}}};
  const auto pp = postprocess_mapping(raw, kEn, kNl);
  REQUIRE(pp.map[POSCategory::kNoun].size() == 2);
  CHECK(pp.map[POSCategory::kNoun][0] ==
        WordPair{"Hiking", "Wandelen", POSCategory::kNoun});
  CHECK(pp.map[POSCategory::kNoun][1] ==
        WordPair{"hiking trails", "wandelpaden", POSCategory::kNoun});
  CHECK(pp.drops.not_in_transcript == 1);
  CHECK(pp.drops.missing_keys == 3);
  CHECK(pp.map[POSCategory::kInterjection].empty());
  const json out = pp.map.to_json();
  CHECK(out["matches"].size() == 5);
}

TEST_CASE("unpaired entries are dropped and counted") {
  const json raw = {{"matches", {{"noun", json::array({json::array({"hiking"})})}}}};
  const auto pp = postprocess_mapping(raw, kEn, kNl);
  CHECK(pp.map.total() == 0);
  CHECK(pp.drops.unpaired == 1);
  CHECK(pp.drops.total_dropped() == 1);
}

TEST_CASE("alternative container shapes are normalized") {
  // YAML "- [[a, b]]" nesting, key/value mappings, role-keyed objects,
  // plural keys and a JSON string body.
  const json raw = json({{"nouns", json::array({json::array({json::array({"hiking", "wandelen"})})})},
                         {"Verb", {{"walking", "wandelt"}}},
                         {"adverb", json::array({{{"source", "often"}, {"target", "meestal"}}})},
                         {"colour", json::array()}})
                       .dump();
  const auto pp = postprocess_mapping(json(raw), kEn, kNl);
  CHECK(pp.map[POSCategory::kNoun].size() == 1);
  REQUIRE(pp.map[POSCategory::kVerb].size() == 1);
  CHECK(pp.map[POSCategory::kVerb][0].side_b == "wandelt");
  REQUIRE(pp.map[POSCategory::kAdverb].size() == 1);
  CHECK(pp.map[POSCategory::kAdverb][0].side_a == "often");
  CHECK(pp.drops.unknown_pos == 1);
}

TEST_CASE("duplicates keep the first occurrence") {
  const json raw = {{"noun", json::array({json::array({"hiking", "wandelen"}),
                                          json::array({"Hiking", "wandelen"}),
                                          json::array({"hiking", "wandelpaden"})})}};
  const auto pp = postprocess_mapping(raw, kEn, kNl);
  CHECK(pp.map[POSCategory::kNoun].size() == 1);
  CHECK(pp.drops.duplicates == 2);
}

TEST_CASE("non-documents are unparsable") {
  for (const json& bad : {json(42), json("not json"), json::array({1, 2}),
                          json({{"matches", 3}})}) {
    try {
      postprocess_mapping(bad, kEn, kNl);
      FAIL("expected UnparsableDocument");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kUnparsableDocument);
    }
  }
}

TEST_CASE("fuzzed documents only yield valid pairs; valid maps are fixed points") {
  Rng rng(11);
  const std::vector<std::string> words = {"Hiking", "is",     "an",      "walking",
                                          "often",  "castle", "wandelen", "wandelt",
                                          "op",     "trails", "",         "!!"};
  std::uniform_int_distribution<std::size_t> w(0, words.size() - 1);
  std::uniform_int_distribution<int> shape(0, 5);
  const char* keys[] = {"noun", "verb", "adverb", "adjective", "interjection", "misc"};
  for (int iter = 0; iter < 300; ++iter) {
    json m = json::object();
    for (const char* k : keys) {
      if (shape(rng) == 0) continue;
      json list = json::array();
      for (int i = shape(rng); i > 0; --i) {
        switch (shape(rng)) {
          case 0: list.push_back(json::array({words[w(rng)]})); break;
          case 1: list.push_back(json::array({words[w(rng)], 3})); break;
          case 2: list.push_back(json::array({json::array({words[w(rng)], words[w(rng)]})})); break;
          case 3: list.push_back(nullptr); break;
          default: list.push_back(json::array({words[w(rng)], words[w(rng)]}));
        }
      }
      m[k] = list;
    }
    const auto pp = postprocess_mapping(json{{"matches", m}}, kEn, kNl);
    const auto en_keys = text::token_keys(kEn);
    const auto nl_keys = text::token_keys(kNl);
    for (auto pos : kAllPOS) {
      for (const auto& p : pp.map[pos]) {
        CHECK(text::find_run(en_keys, text::token_keys(p.side_a)));
        CHECK(text::find_run(nl_keys, text::token_keys(p.side_b)));
        CHECK_FALSE(text::is_punctuation_only(p.side_a));
      }
    }
    const auto again = postprocess_mapping(pp.map.to_json(), kEn, kNl);
    CHECK(again.map == pp.map);
  }
}

TEST_CASE("select_substitutions respects pool and bounds") {
  WordPairMap map;
  for (int i = 0; i < 5; ++i) {
    map[POSCategory::kNoun].push_back({"n" + std::to_string(i), "m", POSCategory::kNoun});
  }
  map[POSCategory::kAdjective].push_back({"adj", "b", POSCategory::kAdjective});
  const POSSet pool{POSCategory::kNoun, POSCategory::kVerb, POSCategory::kInterjection};
  std::set<std::size_t> sizes;
  for (std::uint64_t s = 0; s < 200; ++s) {
    Rng rng(s);
    const auto sel = select_substitutions(map, 3, pool, rng);
    sizes.insert(sel.size());
    CHECK(sel.size() >= 1);
    CHECK(sel.size() <= 3);
    std::set<std::string> uniq;
    for (const auto& p : sel) {
      CHECK(p.pos == POSCategory::kNoun);
      uniq.insert(p.side_a);
    }
    CHECK(uniq.size() == sel.size());
    Rng again(s);
    CHECK(select_substitutions(map, 3, pool, again) == sel);
  }
  CHECK(sizes == std::set<std::size_t>{1, 2, 3});
  Rng rng(1);
  CHECK(select_substitutions(map, 3, POSSet{POSCategory::kInterjection}, rng).empty());
}

TEST_CASE("lexicon TSV validation") {
  const auto dir = testing::scratch_dir("word_mapping_test");
  std::ofstream(dir / "bad.tsv") << "a\tb\tnoun\nonly two\tcols\n";
  CHECK_THROWS_AS(Lexicon::load_tsv(dir / "bad.tsv"), Error);
  std::ofstream(dir / "badpos.tsv") << "a\tb\tpronoun\n";
  CHECK_THROWS_AS(Lexicon::load_tsv(dir / "badpos.tsv"), Error);
  std::ofstream(dir / "ok.tsv") << "# comment\n\nhond\tdog\tnoun\n";
  CHECK(Lexicon::load_tsv(dir / "ok.tsv").entries().size() == 1);
}
