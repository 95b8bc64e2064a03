// src/swords.cpp

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

#include "csforge/swords.hpp"

#include <algorithm>

#include "csforge/error.hpp"
#include "csforge/metrics.hpp"
#include "csforge/text.hpp"

namespace csforge {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(MatrixPolicy policy) {
  switch (policy) {
    case MatrixPolicy::kRandom: return "random";
    case MatrixPolicy::kFixedA: return "fixed_a";
    case MatrixPolicy::kFixedB: return "fixed_b";
  }
  return "random";
}

MatrixPolicy parse_matrix_policy(std::string_view s) {
  if (s == "random") return MatrixPolicy::kRandom;
  if (s == "fixed_a") return MatrixPolicy::kFixedA;
  if (s == "fixed_b") return MatrixPolicy::kFixedB;
  fail(ErrorCode::kInvalidArgument,
       "matrix_policy must be random, fixed_a or fixed_b, got '" +
           std::string(s) + "'");
}

std::string make_record_id(std::string_view sentence_id,
                           std::string_view matrix_lang,
                           std::string_view embedded_lang) {
  std::string id(sentence_id);
  id += '_';
  id += matrix_lang;
  id += embedded_lang;
  return id;
}

std::uint64_t record_seed(std::uint64_t seed, std::string_view sentence_id,
                          const LanguagePair& pair) {
  return derive_seed(seed, {"record", sentence_id, pair.lang_a, pair.lang_b});
}

ordered_json CSRecord::to_json() const {
  ordered_json subs = ordered_json::array();
  for (const auto& s : substitutions) {
    subs.push_back(ordered_json{
        {"pos", to_string(s.pair.pos)},
        {"side_a", s.pair.side_a},
        {"side_b", s.pair.side_b},
        {"matrix_span", {s.matrix_span.start_s, s.matrix_span.end_s}},
        {"embedded_span", {s.embedded_span.start_s, s.embedded_span.end_s}},
    });
  }
  return ordered_json{
      {"record_id", record_id},
      {"sentence_id", sentence_id},
      {"matrix_lang", matrix_lang},
      {"embedded_lang", embedded_lang},
      {"cs_text", cs_text},
      {"audio_path", audio_path},
      {"substitutions", std::move(subs)},
      {"cmi", cmi},
      {"i_index", i_index},
      {"token_langs", token_langs},
      {"duration_s", duration_s},
      {"flags", flags},
  };
}

CSRecord CSRecord::from_json(const json& j) {
  CSRecord r;
  try {
    r.record_id = j.at("record_id").get<std::string>();
    r.sentence_id = j.at("sentence_id").get<std::string>();
    r.matrix_lang = j.at("matrix_lang").get<std::string>();
    r.embedded_lang = j.at("embedded_lang").get<std::string>();
    r.cs_text = j.at("cs_text").get<std::string>();
    r.audio_path = j.at("audio_path").get<std::string>();
    for (const auto& s : j.at("substitutions")) {
      Substitution sub;
      auto pos = parse_pos(s.at("pos").get<std::string>());
      if (!pos) fail(ErrorCode::kInvalidArgument, "unknown substitution pos");
      sub.pair = {s.at("side_a").get<std::string>(),
                  s.at("side_b").get<std::string>(), *pos};
      const auto& ms = s.at("matrix_span");
      const auto& es = s.at("embedded_span");
      sub.matrix_span = {ms.at(0).get<double>(), ms.at(1).get<double>()};
      sub.embedded_span = {es.at(0).get<double>(), es.at(1).get<double>()};
      r.substitutions.push_back(std::move(sub));
    }
    r.cmi = j.at("cmi").get<double>();
    r.i_index = j.at("i_index").get<double>();
    r.token_langs = j.at("token_langs").get<std::vector<std::string>>();
    r.duration_s = j.value("duration_s", 0.0);
    if (j.contains("flags")) r.flags = j.at("flags").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument,
         std::string("malformed manifest record: ") + e.what());
  }
  return r;
}

TextSubstitution substitute_text(std::string_view txt_matrix,
                                 std::span<const WordPair> substitutions,
                                 bool matrix_is_side_a) {
  const auto tokens = text::tokenize(txt_matrix);
  if (substitutions.empty()) {
    // Nothing to replace: the transcript is returned as is.
    return {std::string(txt_matrix),
            std::vector<TokenOrigin>(tokens.size(), TokenOrigin::kMatrix)};
  }
  std::vector<std::string> keys;
  keys.reserve(tokens.size());
  for (const auto& t : tokens) keys.push_back(t.key);

  // starts[i] >= 0: substitution starts[i] begins at token i
  std::vector<int> starts(tokens.size(), -1);
  std::vector<bool> covered(tokens.size(), false);
  std::vector<std::size_t> run_end(substitutions.size());
  for (std::size_t s = 0; s < substitutions.size(); ++s) {
    const auto& pair = substitutions[s];
    const std::string& matrix_side = matrix_is_side_a ? pair.side_a : pair.side_b;
    auto run = text::find_run(keys, text::token_keys(matrix_side));
    if (!run) {
      fail(ErrorCode::kSubstitutionMiss,
           "'" + matrix_side + "' does not occur in the matrix transcript");
    }
    for (std::size_t i = run->first; i < run->second; ++i) {
      if (covered[i]) {
        fail(ErrorCode::kSubstitutionMiss,
             "'" + matrix_side + "' overlaps another substitution");
      }
      covered[i] = true;
    }
    starts[run->first] = static_cast<int>(s);
    run_end[s] = run->second;
  }

  TextSubstitution out;
  std::string body;
  auto append = [&](std::string_view piece, TokenOrigin origin) {
    if (!body.empty()) body += ' ';
    body += piece;
    out.origins.push_back(origin);
  };
  for (std::size_t i = 0; i < tokens.size();) {
    if (starts[i] < 0) {
      append(tokens[i].surface, TokenOrigin::kMatrix);
      ++i;
      continue;
    }
    const auto& pair = substitutions[static_cast<std::size_t>(starts[i])];
    const std::string& embedded = matrix_is_side_a ? pair.side_b : pair.side_a;
    for (const auto& t : text::tokenize(embedded)) {
      append(t.surface, TokenOrigin::kEmbedded);
    }
    i = run_end[static_cast<std::size_t>(starts[i])];
  }
  auto [lead, trail] = text::outer_punctuation(txt_matrix);
  out.cs_text = lead + body + trail;
  return out;
}

GeneratedSample generate_cs_sample(const SourceUtterance& a,
                                   const SourceUtterance& b,
                                   const WordPairMap& map,
                                   const GenerationParams& params, Rng& rng) {
  bool matrix_is_a = params.matrix_policy == MatrixPolicy::kFixedA;
  if (params.matrix_policy == MatrixPolicy::kRandom) {
    matrix_is_a = std::bernoulli_distribution(0.5)(rng);
  }
  const SourceUtterance& matrix = matrix_is_a ? a : b;
  const SourceUtterance& embedded = matrix_is_a ? b : a;

  const auto drawn =
      select_substitutions(map, params.n_max, params.pos_pool, rng);
  if (drawn.empty()) {
    fail(ErrorCode::kNoEligiblePairs,
         "no word pair in categories {" + params.pos_pool.str() + "}");
  }

  struct Plan {
    WordPair pair;
    std::pair<std::size_t, std::size_t> matrix_run, embedded_run;
  };
  std::vector<Plan> located;
  GeneratedSample result;
  for (const auto& pair : drawn) {
    const auto& m_side = matrix_is_a ? pair.side_a : pair.side_b;
    const auto& e_side = matrix_is_a ? pair.side_b : pair.side_a;
    auto m_run = locate_tokens(matrix.alignments, m_side);
    auto e_run = locate_tokens(embedded.alignments, e_side);
    if (!m_run || !e_run) {
      ++result.dropped_pairs;
      continue;
    }
    located.push_back({pair, *m_run, *e_run});
  }
  std::stable_sort(located.begin(), located.end(),
                   [](const Plan& x, const Plan& y) {
                     return x.matrix_run.first < y.matrix_run.first;
                   });
  auto overlaps = [](std::pair<std::size_t, std::size_t> x,
                     std::pair<std::size_t, std::size_t> y) {
    return x.first < y.second && y.first < x.second;
  };
  std::vector<Plan> kept;
  for (auto& plan : located) {
    const bool clash = std::any_of(kept.begin(), kept.end(), [&](const Plan& k) {
      return overlaps(k.matrix_run, plan.matrix_run) ||
             overlaps(k.embedded_run, plan.embedded_run);
    });
    if (clash) {
      ++result.dropped_pairs;
    } else {
      kept.push_back(std::move(plan));
    }
  }
  if (kept.empty()) {
    fail(ErrorCode::kWordNotAligned,
         "none of the " + std::to_string(drawn.size()) +
             " drawn pairs could be located in both utterances");
  }

  std::vector<WordPair> pairs;
  for (const auto& k : kept) pairs.push_back(k.pair);
  const TextSubstitution txt =
      substitute_text(matrix.utterance.transcript, pairs, matrix_is_a);

  std::vector<Replacement> replacements;
  CSRecord& rec = result.record;
  for (const auto& k : kept) {
    const TimeSpan m_span{matrix.alignments[k.matrix_run.first].span.start_s,
                          matrix.alignments[k.matrix_run.second - 1].span.end_s};
    const TimeSpan e_span{
        embedded.alignments[k.embedded_run.first].span.start_s,
        embedded.alignments[k.embedded_run.second - 1].span.end_s};
    replacements.emplace_back(m_span, clip_segment(embedded.audio, e_span));
    rec.substitutions.push_back({k.pair, m_span, e_span});
  }
  result.audio = splice(matrix.audio, replacements,
                        SpliceOptions{params.crossfade_ms});

  rec.sentence_id = matrix.utterance.sentence_id;
  rec.matrix_lang = matrix.utterance.language;
  rec.embedded_lang = embedded.utterance.language;
  rec.record_id =
      make_record_id(rec.sentence_id, rec.matrix_lang, rec.embedded_lang);
  rec.cs_text = txt.cs_text;
  for (auto origin : txt.origins) {
    rec.token_langs.push_back(origin == TokenOrigin::kMatrix ? rec.matrix_lang
                                                             : rec.embedded_lang);
  }
  rec.cmi = cmi(rec.token_langs);
  rec.i_index = i_index(rec.token_langs);
  rec.duration_s = result.audio.duration_seconds();
  return result;
}

}  // namespace csforge
