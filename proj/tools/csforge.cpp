// tools/csforge.cpp

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

// csforge: generate code-switched speech corpora from parallel speech.
//
//   csforge run --config run.toml [--seed N] [--pairs en-nl,de-es] ...
//   csforge validate --config run.toml
//   csforge stats --manifest out/manifest.jsonl [--csv pairs.csv]
//   csforge serve-reference --kind word_map|align|vc [--lexicon P] [--http PORT]

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "csforge/config.hpp"
#include "csforge/error.hpp"
#include "csforge/pipeline.hpp"
#include "csforge/reference_server.hpp"

namespace {

using csforge::RunConfig;

std::string dashed(std::string key) {
  for (auto& c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

// Loads the config file (if any), then applies overrides. Returns the
// config and every diagnostic found on the way.
csforge::ConfigLoad resolve(const std::string& config_path,
                            const std::map<std::string, std::string>& overrides,
                            bool resume_flag) {
  csforge::ConfigLoad load;
  if (!config_path.empty()) load = csforge::load_config(config_path);
  for (const auto& [key, value] : overrides) {
    if (auto d = csforge::apply_override(load.config, key, value); !d.empty()) {
      load.diagnostics.push_back(d);
    }
  }
  if (resume_flag) load.config.resume = true;
  return load;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"csforge: code-switched speech corpus generator"};
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> overrides;
  bool resume_flag = false;

  auto* run = app.add_subcommand("run", "generate a corpus");
  run->add_option("--config", config_path, "TOML run configuration");
  for (const auto& key : csforge::config_keys()) {
    if (key == "resume") continue;
    std::string names = "--" + dashed(key);
    if (key.find('_') != std::string::npos) names += ",--" + key;
    run->add_option_function<std::string>(
        names, [&overrides, key](const std::string& v) { overrides[key] = v; },
        "overrides '" + key + "' from the config file");
  }
  run->add_flag("--resume", resume_flag, "continue an interrupted run");

  auto* validate = app.add_subcommand("validate", "check a configuration");
  validate->add_option("--config", config_path, "TOML run configuration")->required();

  std::string manifest_path, csv_path;
  auto* stats = app.add_subcommand("stats", "statistics of an output manifest");
  stats->add_option("--manifest", manifest_path, "manifest.jsonl")->required();
  stats->add_option("--csv", csv_path, "also write the per-pair CSV here");

  std::string kind, lexicon, host = "127.0.0.1";
  int port = 0;
  auto* serve = app.add_subcommand(
      "serve-reference", "answer backend protocol requests with the built-in backends");
  serve->add_option("--kind", kind, "word_map, align or vc")
      ->required()
      ->check(CLI::IsMember({"word_map", "align", "vc"}));
  serve->add_option("--lexicon", lexicon, "lexicon TSV or directory (word_map)");
  serve->add_option("--http", port, "listen on this port instead of stdio");
  serve->add_option("--host", host, "HTTP bind address");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto load = resolve(config_path, overrides, resume_flag);
      auto more = csforge::validate_config(load.config);
      load.diagnostics.insert(load.diagnostics.end(), more.begin(), more.end());
      if (!load.diagnostics.empty()) {
        for (const auto& d : load.diagnostics) std::cerr << "error: " << d << '\n';
        return 1;
      }
      const auto summary = csforge::run_pipeline(load.config, &std::cerr);
      return summary.exit_code();
    }
    if (*validate) {
      auto load = resolve(config_path, {}, false);
      auto more = csforge::validate_config(load.config);
      load.diagnostics.insert(load.diagnostics.end(), more.begin(), more.end());
      if (load.diagnostics.empty()) {
        std::cout << "OK\n";
        return 0;
      }
      for (const auto& d : load.diagnostics) std::cout << d << '\n';
      return 1;
    }
    if (*stats) {
      const auto records = csforge::read_output_manifest(manifest_path);
      const auto st = csforge::aggregate_stats(records);
      std::cout << st.to_json().dump(2) << '\n';
      if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        out << st.per_pair_csv();
        if (!out) throw csforge::Error(csforge::ErrorCode::kIoError, csv_path);
      }
      return 0;
    }
    if (*serve) {
      std::optional<std::filesystem::path> lex;
      if (!lexicon.empty()) lex = lexicon;
      auto backends = csforge::make_reference_backends(lex);
      if (port > 0) {
        csforge::serve_http(backends, host, port, kind);
      } else {
        std::ios::sync_with_stdio(false);
        csforge::serve_stdio(backends, std::cin, std::cout, kind);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "csforge: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
