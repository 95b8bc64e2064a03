// tests/support/fixture.cpp

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

#include "fixture.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <set>
#include <sstream>

#include "csforge/rng.hpp"
#include "csforge/romanize.hpp"
#include "csforge/word_mapping.hpp"

#ifndef CSFORGE_SCRATCH_DIR
#define CSFORGE_SCRATCH_DIR "scratch"
#endif

namespace csforge::testing {

namespace fs = std::filesystem;

namespace {

struct Concept {
  std::optional<POSCategory> pos;  // nullopt: function word, not in lexicons
};

// Letter inventories; non-Latin scripts exercise the romanizer.
struct Inventory {
  std::vector<std::string> consonants;
  std::vector<std::string> vowels;
};

Inventory inventory_for(const std::string& lang) {
  if (lang == "bg") {
    return {{"б", "в", "г", "д", "ж", "з", "к", "л", "м", "н", "п", "р", "с", "т", "ч", "ш"},
            {"а", "е", "и", "о", "у", "ъ", "я"}};
  }
  if (lang == "el") {
    return {{"β", "γ", "δ", "θ", "κ", "λ", "μ", "ν", "π", "ρ", "σ", "τ", "φ", "χ"},
            {"α", "ε", "η", "ι", "ο", "υ", "ω"}};
  }
  static const std::vector<std::string> base = {"b", "c", "d", "f", "g", "h", "j",
                                                "k", "l", "m", "n", "p", "r", "s",
                                                "t", "v", "w", "z"};
  static const std::vector<std::string> extra = {"ä", "ö", "ü", "é", "å", "ø", "ş", "č"};
  Rng rng(derive_seed(1, {"inventory", lang}));
  Inventory inv;
  for (const auto& c : base) {
    if (std::bernoulli_distribution(0.7)(rng)) inv.consonants.push_back(c);
  }
  inv.vowels = {"a", "e", "i", "o", "u"};
  if (std::bernoulli_distribution(0.5)(rng)) {
    inv.vowels.push_back(extra[std::uniform_int_distribution<std::size_t>(0, 7)(rng)]);
  }
  return inv;
}

std::string pseudo_word(const Inventory& inv, Rng& rng, bool short_word) {
  std::uniform_int_distribution<int> syl(short_word ? 1 : 2, short_word ? 2 : 3);
  std::uniform_int_distribution<std::size_t> c(0, inv.consonants.size() - 1);
  std::uniform_int_distribution<std::size_t> v(0, inv.vowels.size() - 1);
  std::string w;
  for (int i = syl(rng); i > 0; --i) w += inv.consonants[c(rng)] + inv.vowels[v(rng)];
  if (std::bernoulli_distribution(0.3)(rng)) w += inv.consonants[c(rng)];
  return w;
}

std::string capitalize_ascii(std::string w) {
  if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 32);
  return w;
}

}  // namespace

AudioBuffer tone_utterance(const std::vector<double>& durations_s, int sample_rate,
                           std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> freq(180.0, 900.0);
  std::vector<float> out;
  double t_end = 0.0;
  for (double d : durations_s) {
    const std::size_t begin = out.size();
    t_end += d;
    const std::size_t end = to_sample_index(t_end, sample_rate);
    const double f = freq(rng);
    const std::size_t n = end > begin ? end - begin : 0;
    const std::size_t ramp = std::min<std::size_t>(n / 4, sample_rate / 200);
    for (std::size_t i = 0; i < n; ++i) {
      double env = 1.0;
      if (i < ramp) env = static_cast<double>(i) / ramp;
      if (n - 1 - i < ramp) env = static_cast<double>(n - 1 - i) / ramp;
      out.push_back(static_cast<float>(
          0.5 * env * std::sin(2.0 * std::numbers::pi * f * i / sample_rate)));
    }
  }
  return AudioBuffer(std::move(out), sample_rate);
}

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::path(CSFORGE_SCRATCH_DIR) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Fixture make_parallel_fixture(const fs::path& dir, const FixtureOptions& opt) {
  fs::remove_all(dir);
  fs::create_directories(dir / "wav");
  fs::create_directories(dir / "lexicon");
  Fixture fx{dir, dir / "manifest.jsonl", dir / "lexicon", {}};

  // Concept inventory shared by every language.
  std::vector<Concept> concepts;
  auto add = [&](std::optional<POSCategory> pos, int n) {
    for (int i = 0; i < n; ++i) concepts.push_back({pos});
  };
  add(POSCategory::kNoun, 120);
  add(POSCategory::kVerb, 60);
  add(POSCategory::kAdjective, 40);
  add(POSCategory::kAdverb, 25);
  if (opt.with_interjections) add(POSCategory::kInterjection, 8);
  add(std::nullopt, 30);

  std::vector<std::size_t> by_kind[6];
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    by_kind[concepts[i].pos ? static_cast<int>(*concepts[i].pos) : 5].push_back(i);
  }

  // Per-language surface forms, unique within the language.
  std::map<std::string, std::vector<std::string>> words;
  for (const auto& lang : opt.languages) {
    const Inventory inv = inventory_for(lang);
    Rng rng(derive_seed(opt.seed, {"words", lang}));
    std::set<std::string> used;
    auto& list = words[lang];
    for (const auto& c : concepts) {
      std::string w;
      do {
        w = pseudo_word(inv, rng, !c.pos.has_value());
      } while (!used.insert(romanize(w, lang).text).second);
      list.push_back(w);
    }
  }

  // Lexicon per pair, a < b.
  for (std::size_t i = 0; i < opt.languages.size(); ++i) {
    for (std::size_t j = i + 1; j < opt.languages.size(); ++j) {
      std::string a = opt.languages[i], b = opt.languages[j];
      if (b < a) std::swap(a, b);
      std::ofstream lex(fx.lexicon_dir / (a + "-" + b + ".tsv"));
      lex << "# " << a << "\t" << b << "\tpos\n";
      for (std::size_t c = 0; c < concepts.size(); ++c) {
        if (!concepts[c].pos) continue;
        lex << words[a][c] << '\t' << words[b][c] << '\t' << to_string(*concepts[c].pos)
            << '\n';
      }
    }
  }

  std::ofstream manifest(fx.manifest);
  Rng rng(derive_seed(opt.seed, {"sentences"}));
  for (int g = 0; g < opt.groups; ++g) {
    char sid_buf[32];
    std::snprintf(sid_buf, sizeof sid_buf, "s%05d", g);
    const std::string sid = sid_buf;

    // Concept sequence: a few content words of each kind among function words.
    std::uniform_int_distribution<int> len(opt.min_tokens, opt.max_tokens);
    const int n = len(rng);
    std::vector<std::size_t> seq;
    std::set<std::size_t> taken;
    auto draw = [&](int kind) {
      const auto& pool = by_kind[kind];
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      for (;;) {
        std::size_t c = pool[pick(rng)];
        if (kind == 5 || taken.insert(c).second) return c;
      }
    };
    const int nouns = std::uniform_int_distribution<int>(2, 4)(rng);
    const int verbs = std::uniform_int_distribution<int>(1, 2)(rng);
    const int adjs = std::uniform_int_distribution<int>(0, 2)(rng);
    const int advs = std::uniform_int_distribution<int>(0, 1)(rng);
    const bool interj = opt.with_interjections && std::bernoulli_distribution(0.25)(rng);
    if (interj) seq.push_back(draw(static_cast<int>(POSCategory::kInterjection)));
    for (int i = 0; i < nouns; ++i) seq.push_back(draw(0));
    for (int i = 0; i < verbs; ++i) seq.push_back(draw(1));
    for (int i = 0; i < advs; ++i) seq.push_back(draw(2));
    for (int i = 0; i < adjs; ++i) seq.push_back(draw(3));
    while (static_cast<int>(seq.size()) < n) seq.push_back(draw(5));
    std::shuffle(seq.begin() + (interj ? 1 : 0), seq.end(), rng);
    const std::size_t comma_after =
        std::bernoulli_distribution(0.5)(rng) ? seq.size() / 2 : seq.size();

    for (const auto& lang : opt.languages) {
      std::string text;
      std::vector<double> weights;
      for (std::size_t t = 0; t < seq.size(); ++t) {
        std::string w = words[lang][seq[t]];
        weights.push_back(static_cast<double>(
            std::max<std::size_t>(romanize(w, lang).text.size(), 1)));
        if (t == 0) w = capitalize_ascii(w);
        if (t + 1 == comma_after) w += ",";
        if (!text.empty()) text += ' ';
        text += w;
      }
      text += ".";
      double total = 0.0;
      for (double w : weights) total += w;
      const double scale =
          opt.utterance_s ? *opt.utterance_s / total : opt.seconds_per_char;
      for (double& w : weights) w *= scale;

      const std::string utt = sid + "_" + lang;
      const fs::path wav = dir / "wav" / (utt + ".wav");
      write_wav(tone_utterance(weights, opt.sample_rate,
                               derive_seed(opt.seed, {"tone", utt})),
                wav);
      manifest << nlohmann::json{{"sentence_id", sid},
                                 {"utt_id", utt},
                                 {"language", lang},
                                 {"audio_path", "wav/" + utt + ".wav"},
                                 {"transcript", text},
                                 {"split", "test"}}
                      .dump()
               << '\n';
      fx.transcripts[sid][lang] = text;
    }
  }
  return fx;
}

RunConfig fixture_config(const Fixture& fixture, const fs::path& out) {
  RunConfig c;
  c.manifest = fixture.manifest;
  c.out = out;
  c.lexicon = fixture.lexicon_dir;
  c.workers = 2;
  c.generation.seed = 42;
  return c;
}

}  // namespace csforge::testing
