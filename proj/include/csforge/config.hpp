// include/csforge/config.hpp

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

// Run configuration. The TOML file is flat: every key below is a top-level
// key, and every key can be overridden on the command line by the flag of
// the same name (underscores or dashes). Relative paths in the file are
// resolved against the file's directory, relative paths given as overrides
// against the working directory.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csforge/backend.hpp"
#include "csforge/corpus.hpp"
#include "csforge/swords.hpp"

namespace csforge {

struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path out;
  std::vector<std::string> languages;  // empty: every manifest language
  std::vector<LanguagePair> pairs;     // non-empty: overrides `languages`
  std::size_t pair_cap = 0;            // 0: no cap
  int workers = 4;

  double peak_dbfs = -1.0;
  double low_hz = 80.0;
  double high_hz = 7000.0;
  double min_reference_s = 2.0;

  GenerationParams generation;

  std::string mapper = "builtin";
  std::string aligner = "builtin";
  std::string vc = "builtin";
  std::optional<std::filesystem::path> lexicon;  // builtin mapper data
  double timeout_s = 60.0;
  int mapper_in_flight = 4;
  int aligner_in_flight = 4;
  int vc_in_flight = 2;
  bool aligner_romanized = true;  // protocol aligners only

  std::optional<std::filesystem::path> mapping_cache;
  bool resume = false;
  bool check_audio = true;

  BackendEndpoint mapper_endpoint() const;
  BackendEndpoint aligner_endpoint() const;
  BackendEndpoint vc_endpoint() const;
};

/// Every recognized key, in documentation order.
const std::vector<std::string>& config_keys();

struct ConfigLoad {
  RunConfig config;
  std::vector<std::string> diagnostics;  // "key: message"
};

/// Parses TOML text. Unknown keys and badly typed values are diagnostics;
/// the remaining keys still apply.
ConfigLoad parse_config(const std::string& toml_text,
                        const std::filesystem::path& base_dir = {});
ConfigLoad load_config(const std::filesystem::path& path);

/// Applies one command-line override. `key` may use dashes. Returns a
/// diagnostic, or an empty string on success.
std::string apply_override(RunConfig& config, const std::string& key,
                           const std::string& value);

/// Semantic checks that need the whole config or the file system.
std::vector<std::string> validate_config(const RunConfig& config);

/// Flat TOML rendering that parse_config reads back to the same config.
std::string to_toml(const RunConfig& config);

}  // namespace csforge
