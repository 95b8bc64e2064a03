// include/csforge/pipeline.hpp

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

// End-to-end generation run: corpus loading, pair enumeration and sampling,
// then per record preprocess, map, align, generate, unify and write, with
// the manifest emitted in a fixed task order regardless of worker count.
//
// Output directory layout:
//   manifest.jsonl     one CSRecord per line
//   audio/*.wav        16-bit mono, one per record
//   done.log           append-only "task_key<TAB>status<TAB>detail" lines
//   stats.json         recomputed from manifest.jsonl alone, plus skip counts
//   pairs.csv          per-pair totals
//   skip_report.json   attempted / emitted / skipped by reason, missing audio
//   run_config.toml    the effective configuration

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "csforge/config.hpp"
#include "csforge/metrics.hpp"

namespace csforge {

struct RunSummary {
  std::size_t n_pairs = 0;
  std::size_t attempted = 0;
  std::size_t emitted = 0;
  std::size_t reused = 0;  // taken over from a previous run on resume
  std::map<std::string, std::size_t> skipped;  // reason -> count
  std::size_t missing_audio = 0;
  std::size_t partial_groups = 0;
  std::size_t rows_outside_language_set = 0;
  double elapsed_s = 0.0;
  DatasetStats stats;

  std::size_t total_skipped() const;
  /// 0 with at least one record, 2 with none.
  int exit_code() const { return emitted > 0 ? 0 : 2; }
};

/// Runs the whole pipeline. Per-record failures are skipped and counted;
/// anything else (invalid config, unreadable manifest, unwritable output)
/// throws. `log`, when given, receives progress lines.
RunSummary run_pipeline(const RunConfig& config, std::ostream* log = nullptr);

/// Reads a manifest.jsonl back into records.
std::vector<CSRecord> read_output_manifest(const std::filesystem::path& path);

/// The task key a record belongs to: "{sentence_id}|{lang_a}-{lang_b}".
std::string task_key(const std::string& sentence_id, const LanguagePair& pair);

}  // namespace csforge
