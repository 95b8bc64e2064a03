// tests/support/fixture.hpp

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

// Synthetic n-way parallel speech corpora for tests: pseudo-word
// vocabularies per language, POS-tagged concepts shared across languages,
// tone audio whose token durations follow romanized token length (so the
// uniform reference aligner recovers them exactly), and per-pair lexicons.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csforge/audio.hpp"
#include "csforge/config.hpp"

namespace csforge::testing {

struct FixtureOptions {
  std::vector<std::string> languages{"en", "nl"};
  int groups = 5;
  int sample_rate = 16000;
  double seconds_per_char = 0.035;
  std::optional<double> utterance_s;  // when set, every utterance lasts this long
  int min_tokens = 14;
  int max_tokens = 22;
  bool with_interjections = true;
  std::uint64_t seed = 7;
};

struct Fixture {
  std::filesystem::path dir;
  std::filesystem::path manifest;
  std::filesystem::path lexicon_dir;
  // sentence_id -> language -> transcript
  std::map<std::string, std::map<std::string, std::string>> transcripts;
};

/// Writes manifest.jsonl, wav/ and lexicon/ under `dir` (recreated).
Fixture make_parallel_fixture(const std::filesystem::path& dir,
                              const FixtureOptions& options = {});

/// Tone sequence: token i gets `durations_s[i]` seconds of a sine.
AudioBuffer tone_utterance(const std::vector<double>& durations_s, int sample_rate,
                           std::uint64_t seed);

/// Fresh, empty directory under the test scratch root.
std::filesystem::path scratch_dir(const std::string& name);

/// Run config pointing at the fixture with builtin backends.
RunConfig fixture_config(const Fixture& fixture, const std::filesystem::path& out);

std::string read_file(const std::filesystem::path& path);

}  // namespace csforge::testing
