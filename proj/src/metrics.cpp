// src/metrics.cpp

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

#include "csforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include "csforge/error.hpp"
#include "csforge/romanize.hpp"
#include "csforge/swords.hpp"
#include "csforge/text.hpp"

namespace csforge {

double cmi(std::span<const std::string> token_langs) {
  if (token_langs.empty()) return 0.0;
  std::unordered_map<std::string_view, std::size_t> counts;
  std::size_t top = 0;
  for (const auto& l : token_langs) top = std::max(top, ++counts[l]);
  return 1.0 - static_cast<double>(top) /
                   static_cast<double>(token_langs.size());
}

double i_index(std::span<const std::string> token_langs) {
  if (token_langs.size() <= 1) return 0.0;
  std::size_t switches = 0;
  for (std::size_t i = 1; i < token_langs.size(); ++i) {
    if (token_langs[i] != token_langs[i - 1]) ++switches;
  }
  return static_cast<double>(switches) /
         static_cast<double>(token_langs.size() - 1);
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  // b is the shorter string; `row` holds distances against b's prefixes.
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    const char ca = a[i - 1];
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t sub = diag + (ca == b[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[b.size()];
}

double rer(std::string_view reference, std::string_view hypothesis,
           std::string_view lang_ref, std::string_view lang_hyp) {
  const std::string ref = romanize(reference, lang_ref).text;
  if (ref.empty()) {
    fail(ErrorCode::kEmptyReference, "reference romanizes to an empty string");
  }
  const std::string hyp = romanize(hypothesis, lang_hyp).text;
  return 100.0 * static_cast<double>(levenshtein(ref, hyp)) /
         static_cast<double>(ref.size());
}

void LetterCounter::add(std::string_view text, std::string_view lang) {
  for (char c : romanize(text, lang).text) {
    if (c >= 'a' && c <= 'z') ++counts_[static_cast<std::size_t>(c - 'a')];
  }
}

CharDiversity LetterCounter::result() const {
  CharDiversity out;
  out.counts = counts_;
  std::size_t total = 0;
  for (auto c : counts_) total += c;
  out.degenerate = total == 0;
  if (!out.degenerate) {
    for (std::size_t i = 0; i < 26; ++i) {
      out.frequency[i] =
          static_cast<double>(counts_[i]) / static_cast<double>(total);
    }
  }
  return out;
}

CharDiversity char_diversity(
    std::span<const std::pair<std::string, std::string>> texts) {
  LetterCounter counter;
  for (const auto& [t, lang] : texts) counter.add(t, lang);
  return counter.result();
}

double jensen_shannon(const LetterHistogram& p, const LetterHistogram& q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) d += 0.5 * p[i] * std::log2(p[i] / m);
    if (q[i] > 0.0) d += 0.5 * q[i] * std::log2(q[i] / m);
  }
  return std::clamp(d, 0.0, 1.0);
}

nlohmann::ordered_json DatasetStats::to_json() const {
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < 26; ++i) {
    hist[std::string(1, static_cast<char>('a' + i))] = char_histogram[i];
  }
  nlohmann::ordered_json skip_obj = nlohmann::ordered_json::object();
  for (const auto& [k, v] : skips) skip_obj[k] = v;
  return nlohmann::ordered_json{
      {"n_language_pairs", n_language_pairs},
      {"total_duration_s", total_duration_s},
      {"n_utterances", n_utterances},
      {"n_token_types", n_token_types},
      {"mean_cmi", mean_cmi},
      {"mean_i_index", mean_i_index},
      {"char_histogram", std::move(hist)},
      {"char_histogram_degenerate", char_histogram_degenerate},
      {"skips", std::move(skip_obj)},
  };
}

std::string DatasetStats::per_pair_csv() const {
  std::string out = "pair,n_utt,duration_s,mean_cmi,mean_i_index\n";
  char buf[160];
  for (const auto& [pair, s] : per_pair) {
    const double n = s.n_utt ? static_cast<double>(s.n_utt) : 1.0;
    std::snprintf(buf, sizeof buf, "%s,%zu,%.3f,%.6f,%.6f\n", pair.c_str(),
                  s.n_utt, s.duration_s, s.cmi_sum / n, s.i_index_sum / n);
    out += buf;
  }
  return out;
}

DatasetStats aggregate_stats(std::span<const CSRecord> records,
                             std::span<const double> durations_s) {
  if (!durations_s.empty() && durations_s.size() != records.size()) {
    fail(ErrorCode::kInvalidArgument, "durations do not match records");
  }
  DatasetStats st;
  std::unordered_set<std::string> types;
  LetterCounter letters;
  double cmi_sum = 0.0, i_sum = 0.0;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const CSRecord& rec = records[r];
    const double dur = durations_s.empty() ? rec.duration_s : durations_s[r];
    const auto pair = LanguagePair::make(rec.matrix_lang, rec.embedded_lang);
    PairStats& ps = st.per_pair[pair.str()];
    ++ps.n_utt;
    ps.duration_s += dur;
    ps.cmi_sum += rec.cmi;
    ps.i_index_sum += rec.i_index;
    st.total_duration_s += dur;
    cmi_sum += rec.cmi;
    i_sum += rec.i_index;
    const std::string lowered = text::to_lower(rec.cs_text);
    std::size_t i = 0;
    while (i < lowered.size()) {
      const std::size_t b = lowered.find_first_not_of(" \t\n\r", i);
      if (b == std::string::npos) break;
      const std::size_t e = std::min(lowered.find_first_of(" \t\n\r", b),
                                     lowered.size());
      types.insert(lowered.substr(b, e - b));
      i = e;
    }
    // Embedded tokens romanize under the embedded language's script; the
    // romanizer is script-driven so a single pass over the text suffices.
    letters.add(rec.cs_text, rec.matrix_lang);
  }
  st.n_utterances = records.size();
  st.n_language_pairs = st.per_pair.size();
  st.n_token_types = types.size();
  if (!records.empty()) {
    st.mean_cmi = cmi_sum / static_cast<double>(records.size());
    st.mean_i_index = i_sum / static_cast<double>(records.size());
  }
  const CharDiversity cd = letters.result();
  st.char_histogram = cd.frequency;
  st.char_histogram_degenerate = cd.degenerate;
  return st;
}

}  // namespace csforge
