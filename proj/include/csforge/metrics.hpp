// include/csforge/metrics.hpp

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
#include <json.hpp>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csforge {

struct CSRecord;

/// Code-mixing index: 1 - (count of the most frequent label) / N, 0 for an
/// empty or monolingual sequence.
double cmi(std::span<const std::string> token_langs);

/// Switch points over token boundaries: switches / (N - 1), 0 for N <= 1.
double i_index(std::span<const std::string> token_langs);

/// Unit-cost Levenshtein distance, O(|a|·|b|) time and O(min(|a|,|b|))
/// memory.
std::size_t levenshtein(std::string_view a, std::string_view b);

/// Romanized character error rate in percent: both strings are romanized,
/// spaces count as characters, the denominator is the romanized reference
/// length. Throws EmptyReference when the reference romanizes to nothing.
double rer(std::string_view reference, std::string_view hypothesis,
           std::string_view lang_ref = {}, std::string_view lang_hyp = {});

using LetterHistogram = std::array<double, 26>;

struct CharDiversity {
  LetterHistogram frequency{};   // relative, sums to 1 unless degenerate
  std::array<std::size_t, 26> counts{};
  bool degenerate = true;        // no letters at all
};

/// a-z histogram over the romanized texts; digits and spaces are ignored.
CharDiversity char_diversity(
    std::span<const std::pair<std::string, std::string>> texts);

/// Accumulates letter counts text by text; char_diversity in streaming form.
class LetterCounter {
 public:
  void add(std::string_view text, std::string_view lang = {});
  CharDiversity result() const;

 private:
  std::array<std::size_t, 26> counts_{};
};

/// Base-2 Jensen-Shannon divergence, in [0, 1].
double jensen_shannon(const LetterHistogram& p, const LetterHistogram& q);

struct PairStats {
  std::size_t n_utt = 0;
  double duration_s = 0.0;
  double cmi_sum = 0.0;
  double i_index_sum = 0.0;
};

struct DatasetStats {
  std::size_t n_language_pairs = 0;
  double total_duration_s = 0.0;
  std::size_t n_utterances = 0;
  std::size_t n_token_types = 0;
  double mean_cmi = 0.0;
  double mean_i_index = 0.0;
  LetterHistogram char_histogram{};
  bool char_histogram_degenerate = true;
  std::map<std::string, std::size_t> skips;  // reason -> count
  std::map<std::string, PairStats> per_pair;  // "en-nl" -> totals

  nlohmann::ordered_json to_json() const;
  /// pair,n_utt,duration_s,mean_cmi,mean_i_index
  std::string per_pair_csv() const;
};

/// Counts, sums and means over emitted records. `durations_s` pairs with
/// `records` by index; when empty, each record's own duration_s is used.
DatasetStats aggregate_stats(std::span<const CSRecord> records,
                             std::span<const double> durations_s = {});

}  // namespace csforge
