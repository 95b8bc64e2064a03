// tests/acceptance.cpp

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

// Acceptance checks. Prints one PASS or FAIL line per criterion with the
// measured values, and exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "csforge/audio.hpp"
#include "csforge/corpus.hpp"
#include "csforge/lexicon.hpp"
#include "csforge/metrics.hpp"
#include "csforge/pipeline.hpp"
#include "csforge/romanize.hpp"
#include "csforge/swords.hpp"
#include "csforge/text.hpp"
#include "csforge/word_mapping.hpp"
#include "fixture.hpp"

using namespace csforge;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Verdict()>& check) {
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  if (!v.pass) ++failures;
  std::printf("%s  %-28s %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

const std::vector<std::string> kInDomain = {
    "bg", "cs", "da", "de", "el", "en", "es", "et", "fi", "fr", "hr", "hu",
    "it", "lt", "lv", "mt", "nl", "pl", "pt", "ro", "sk", "sl", "sv"};

// ---- oracles, written directly from the definitions ----

double cmi_brute(const std::vector<std::string>& l) {
  if (l.empty()) return 0.0;
  std::size_t best = 0;
  for (const auto& x : l) {
    best = std::max<std::size_t>(best, std::count(l.begin(), l.end(), x));
  }
  return 1.0 - static_cast<double>(best) / static_cast<double>(l.size());
}

double i_index_brute(const std::vector<std::string>& l) {
  if (l.size() < 2) return 0.0;
  std::size_t sw = 0;
  for (std::size_t i = 0; i + 1 < l.size(); ++i) sw += l[i] != l[i + 1];
  return static_cast<double>(sw) / static_cast<double>(l.size() - 1);
}

std::vector<float> splice_oracle(const AudioBuffer& base,
                                 std::vector<Replacement> reps) {
  std::sort(reps.begin(), reps.end(), [](const auto& x, const auto& y) {
    return x.first.start_s < y.first.start_s;
  });
  const auto in = base.samples();
  std::vector<float> out;
  std::size_t cursor = 0;
  for (const auto& [span, rep] : reps) {
    const std::size_t s = to_sample_index(span.start_s, base.sample_rate());
    const std::size_t e = to_sample_index(span.end_s, base.sample_rate());
    for (std::size_t i = cursor; i < s; ++i) out.push_back(in[i]);
    for (float x : rep.samples()) out.push_back(x);
    cursor = e;
  }
  for (std::size_t i = cursor; i < in.size(); ++i) out.push_back(in[i]);
  return out;
}

double sine_gain_db(double freq, int rate) {
  const std::size_t n = static_cast<std::size_t>(rate) * 2;
  std::vector<float> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = static_cast<float>(0.5 * std::sin(2.0 * M_PI * freq * i / rate));
  }
  const AudioBuffer in(std::move(s), rate);
  const AudioBuffer out = bandpass_filter(in, 80.0, 7000.0);
  // steady state: measure over the second second only
  auto rms = [&](const AudioBuffer& b) {
    double acc = 0.0;
    for (std::size_t i = n / 2; i < n; ++i) acc += double(b.samples()[i]) * b.samples()[i];
    return std::sqrt(acc / static_cast<double>(n - n / 2));
  };
  return 20.0 * std::log10(rms(out) / rms(in));
}

// ---- shared fixture run: 5 languages x 100 groups -> 10 pairs x 100 ----

struct FixtureRun {
  testing::Fixture fixture;
  RunConfig config;
  RunSummary summary;
  std::vector<CSRecord> records;
};

const FixtureRun& fixture_run() {
  static const FixtureRun run = [] {
    FixtureRun r;
    const auto dir = testing::scratch_dir("acceptance_run");
    testing::FixtureOptions opt;
    opt.languages = {"bg", "de", "el", "en", "pl"};
    opt.groups = 100;
    r.fixture = testing::make_parallel_fixture(dir / "fx", opt);
    r.config = testing::fixture_config(r.fixture, dir / "w1");
    r.config.generation.seed = 42;
    r.config.workers = 1;
    r.summary = run_pipeline(r.config);
    r.records = read_output_manifest(r.config.out / "manifest.jsonl");
    return r;
  }();
  return run;
}

const std::string kHikingEn =
    "Hiking is an outdoor activity which consists of walking in natural "
    "environments, often on hiking trails.";
const std::string kHikingNl =
    "Wandelen is een buitenactiviteit waarbij je in een natuurlijke omgeving "
    "wandelt, meestal op wandelpaden.";
const std::string kHikingCs =
    "Wandelen is an outdoor activity which consists of walking in natural "
    "environments often on wandelpaden.";

}  // namespace

int main() {
  report("pair_enumeration", [] {
    const auto t0 = Clock::now();
    const auto pairs =
        enumerate_language_pairs(std::set<std::string>(kInDomain.begin(), kInDomain.end()));
    bool formula = true;
    for (std::size_t n = 2; n <= 30; ++n) {
      std::set<std::string> langs;
      for (std::size_t i = 0; i < n; ++i) {
        langs.insert(std::string{char('a' + i / 26), char('a' + i % 26)});
      }
      const auto p = enumerate_language_pairs(langs);
      std::set<std::string> distinct;
      for (const auto& x : p) distinct.insert(x.str());
      formula = formula && p.size() == n * (n - 1) / 2 && distinct.size() == p.size();
    }
    const double t = seconds_since(t0);
    return Verdict{kInDomain.size() == 23 && pairs.size() == 253 && formula && t < 1.0,
                   fmt("23 languages -> %.0f pairs; n(n-1)/2 for n=2..30 ",
                       double(pairs.size())) +
                       (formula ? "holds" : "FAILS") + fmt("; %.3f s", t)};
  });

  report("metric_oracles", [] {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    const std::vector<std::string> labels = {"en", "nl", "de", "fi"};
    std::size_t mismatches = 0;
    for (int t = 0; t < 10000; ++t) {
      std::vector<std::string> seq(std::uniform_int_distribution<int>(0, 40)(rng));
      const int k = std::uniform_int_distribution<int>(1, 4)(rng);
      for (auto& s : seq) s = labels[std::uniform_int_distribution<int>(0, k - 1)(rng)];
      mismatches += cmi(seq) != cmi_brute(seq);
      mismatches += i_index(seq) != i_index_brute(seq);
    }
    const auto& run = fixture_run();
    const double c = run.summary.stats.mean_cmi, ii = run.summary.stats.mean_i_index;
    const double t = seconds_since(t0);
    const bool ok = mismatches == 0 && c >= 0.05 && c <= 0.20 && ii >= 0.10 &&
                    ii <= 0.30 && t < 30.0;
    return Verdict{ok, fmt("10000 sequences, %.0f mismatches; mean CMI %.4f, mean "
                           "I-index %.4f over the fixture run; %.1f s",
                           double(mismatches), c, ii, t) +
                           fmt(" (%.0f records)", double(run.records.size()))};
  });

  report("filter_contract", [] {
    const auto t0 = Clock::now();
    const double g1k = sine_gain_db(1000.0, 16000);
    const double g50 = sine_gain_db(50.0, 16000);
    const double t = seconds_since(t0);
    return Verdict{std::abs(g1k) <= 1.0 && g50 <= -20.0 && t < 5.0,
                   fmt("1 kHz %+.3f dB, 50 Hz %+.2f dB; %.3f s", g1k, g50, t)};
  });

  report("splice_arithmetic", [] {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(99);
    std::size_t bad_len = 0, bad_bytes = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const int rate = 16000;
      const std::size_t n = std::uniform_int_distribution<std::size_t>(2000, 40000)(rng);
      std::vector<float> s(n);
      std::uniform_real_distribution<float> amp(-1.0f, 1.0f);
      for (auto& x : s) x = amp(rng);
      const AudioBuffer base(std::move(s), rate);
      // random disjoint spans from sorted cut points
      const int k = std::uniform_int_distribution<int>(0, 5)(rng);
      std::vector<double> cuts;
      std::uniform_real_distribution<double> pos(0.0, base.duration_seconds());
      for (int i = 0; i < 2 * k; ++i) cuts.push_back(pos(rng));
      std::sort(cuts.begin(), cuts.end());
      std::vector<Replacement> reps;
      long expected = static_cast<long>(n);
      for (int i = 0; i < k; ++i) {
        std::vector<float> r(std::uniform_int_distribution<std::size_t>(0, 5000)(rng));
        for (auto& x : r) x = amp(rng);
        const TimeSpan span{cuts[2 * i], cuts[2 * i + 1]};
        expected += static_cast<long>(r.size()) -
                    static_cast<long>(to_sample_index(span.end_s, rate) -
                                      to_sample_index(span.start_s, rate));
        reps.emplace_back(span, AudioBuffer(std::move(r), rate));
      }
      std::shuffle(reps.begin(), reps.end(), rng);
      const AudioBuffer out = splice(base, reps);
      const auto naive = splice_oracle(base, reps);
      bad_len += static_cast<long>(out.size()) != expected;
      bad_bytes += !(out.size() == naive.size() &&
                     std::equal(naive.begin(), naive.end(), out.samples().begin(),
                                [](float a, float b) {
                                  return std::memcmp(&a, &b, sizeof a) == 0;
                                }));
    }
    const double t = seconds_since(t0);
    return Verdict{bad_len == 0 && bad_bytes == 0 && t < 10.0,
                   fmt("1000 sets: %.0f length mismatches, %.0f byte mismatches; %.2f s",
                       double(bad_len), double(bad_bytes), t)};
  });

  report("hiking_example", [] {
    LexiconMapper mapper{fs::path(std::string(CSFORGE_TEST_DATA) + "/hiking/en-nl.tsv")};
    const auto map = postprocess_mapping(
                         request_mapping(mapper, "en", "nl", kHikingEn, kHikingNl),
                         kHikingEn, kHikingNl)
                         .map;
    const auto& nouns = map[POSCategory::kNoun];
    const auto out = substitute_text(kHikingEn, nouns, true);
    return Verdict{out.cs_text == kHikingCs, "\"" + out.cs_text + "\""};
  });

  report("generation_constraints", [] {
    const auto& run = fixture_run();
    const POSSet pool{POSCategory::kNoun, POSCategory::kVerb, POSCategory::kInterjection};
    std::size_t bad_count = 0, bad_pos = 0, bad_metric = 0;
    for (const auto& r : run.records) {
      bad_count += r.substitutions.size() < 1 || r.substitutions.size() > 3;
      for (const auto& s : r.substitutions) bad_pos += !pool.contains(s.pair.pos);
      bad_metric += cmi(r.token_langs) != r.cmi || i_index(r.token_langs) != r.i_index ||
                    r.token_langs.size() != text::tokenize(r.cs_text).size();
    }
    const bool ok = run.summary.attempted == 1000 && !run.records.empty() &&
                    bad_count + bad_pos + bad_metric == 0;
    return Verdict{ok, fmt("%.0f of %.0f attempted emitted; %.0f bad counts, "
                           "%.0f bad POS",
                           double(run.records.size()), double(run.summary.attempted),
                           double(bad_count), double(bad_pos)) +
                           fmt(", %.0f metric mismatches", double(bad_metric))};
  });

  report("determinism", [] {
    const auto& run = fixture_run();
    RunConfig cfg = run.config;
    cfg.out = run.config.out.parent_path() / "w8";
    cfg.workers = 8;
    run_pipeline(cfg);
    const bool manifest_same = testing::read_file(run.config.out / "manifest.jsonl") ==
                               testing::read_file(cfg.out / "manifest.jsonl");
    std::size_t wavs = 0, differing = 0;
    for (const auto& e : fs::directory_iterator(run.config.out / "audio")) {
      ++wavs;
      const fs::path other = cfg.out / "audio" / e.path().filename();
      differing += !fs::exists(other) ||
                   testing::read_file(e.path()) != testing::read_file(other);
    }
    std::size_t wavs8 = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(cfg.out / "audio")) ++wavs8;
    return Verdict{manifest_same && differing == 0 && wavs == wavs8 && wavs > 0,
                   std::string("seed 42, workers 1 vs 8: manifest ") +
                       (manifest_same ? "identical" : "differs") +
                       fmt("; %.0f WAVs, %.0f differ", double(wavs), double(differing))};
  });

  report("char_diversity", [] {
    const auto& run = fixture_run();
    LetterCounter source;
    for (const auto& [sid, by_lang] : run.fixture.transcripts) {
      for (const auto& [lang, text] : by_lang) source.add(text, lang);
    }
    const auto src = source.result();
    const auto& cs = run.summary.stats;
    const double jsd = jensen_shannon(cs.char_histogram, src.frequency);
    return Verdict{!cs.char_histogram_degenerate && jsd < 0.01,
                   fmt("JSD(CS, pooled source) = %.6f", jsd)};
  });

  report("rer_kernel", [] {
    struct Hand {
      const char* ref;
      const char* hyp;
      const char* lang;
      std::size_t distance;
      std::size_t ref_len;  // romanized
    };
    // distances worked out by hand
    const std::vector<Hand> hand = {
        {"kitten", "sitting", "en", 3, 6},
        {"sitting", "kitten", "en", 3, 7},
        {"flaw", "lawn", "en", 2, 4},
        {"abc", "abd", "en", 1, 3},
        {"abc", "", "en", 3, 3},
        {"a", "a", "en", 0, 1},
        {"intention", "execution", "en", 5, 9},
        {"sunday", "saturday", "en", 3, 6},
        {"book", "back", "en", 2, 4},
        {"hello world", "hello word", "en", 1, 11},
        {"abcdef", "azced", "en", 3, 6},
        {"gumbo", "gambol", "en", 2, 5},
        {"ab", "ba", "en", 2, 2},
        {"a b", "ab", "en", 1, 3},
        {"rosettacode", "raisethysword", "en", 8, 11},
        {"Straße", "strasse", "de", 0, 7},
        {"Straße", "strase", "de", 1, 7},
        {"München", "munchen", "de", 0, 7},
        {"мир", "mip", "bg", 1, 3},
        {"Hond", "hand", "nl", 1, 4},
    };
    std::size_t wrong = 0;
    for (const auto& h : hand) {
      const std::string ref = romanize(h.ref, h.lang).text;
      const std::string hyp = romanize(h.hyp, h.lang).text;
      const double want = 100.0 * static_cast<double>(h.distance) / h.ref_len;
      wrong += levenshtein(ref, hyp) != h.distance || ref.size() != h.ref_len ||
               rer(h.ref, h.hyp, h.lang, h.lang) != want;
    }
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> ch(0, 26);
    std::vector<std::pair<std::string, std::string>> pairs(10000);
    for (auto& [a, b] : pairs) {
      a.resize(200);
      b.resize(200);
      for (auto& c : a) { const int v = ch(rng); c = v == 26 ? ' ' : char('a' + v); }
      for (auto& c : b) { const int v = ch(rng); c = v == 26 ? ' ' : char('a' + v); }
    }
    const auto t0 = Clock::now();
    double sum = 0.0;
    for (const auto& [a, b] : pairs) sum += rer(a, b);
    const double t = seconds_since(t0);
    return Verdict{wrong == 0 && t < 5.0,
                   fmt("20 hand pairs, %.0f wrong; 10000 x 200-char pairs in %.2f s "
                       "(mean RER %.1f)",
                       double(wrong), t, sum / 10000.0)};
  });

  report("throughput", [] {
    const auto dir = testing::scratch_dir("acceptance_throughput");
    testing::FixtureOptions opt;
    opt.languages = {"de", "en", "fi", "nl"};
    opt.groups = 50;
    opt.utterance_s = 10.0;
    const auto fx = testing::make_parallel_fixture(dir / "fx", opt);
    RunConfig cfg = testing::fixture_config(fx, dir / "out");
    cfg.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const auto t0 = Clock::now();
    const RunSummary s = run_pipeline(cfg);
    const double t = seconds_since(t0);
    const double rate = static_cast<double>(s.emitted) / t;
    return Verdict{rate >= 50.0,
                   fmt("%.0f records of 10 s at 16 kHz in %.2f s = %.1f records/s "
                       "on %.0f worker(s)",
                       double(s.emitted), t, rate, double(cfg.workers))};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
