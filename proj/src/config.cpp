// src/config.cpp

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

#include "csforge/config.hpp"

#include <toml.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "csforge/audio.hpp"
#include "csforge/error.hpp"

namespace csforge {

namespace fs = std::filesystem;

namespace {

// A value either from the TOML document or from a command-line string; the
// field decides how to read it.
struct Value {
  const toml::node* node = nullptr;
  const std::string* text = nullptr;
  fs::path base;
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::string as_string(const Value& v) {
  if (v.text) return *v.text;
  if (auto s = v.node->value<std::string>()) return *s;
  throw std::invalid_argument("expected a string");
}

std::int64_t as_int(const Value& v) {
  if (v.text) {
    std::int64_t x = 0;
    const char* end = v.text->data() + v.text->size();
    auto [p, ec] = std::from_chars(v.text->data(), end, x);
    if (ec != std::errc() || p != end) {
      throw std::invalid_argument("expected an integer, got '" + *v.text + "'");
    }
    return x;
  }
  if (v.node->is_integer()) return *v.node->value<std::int64_t>();
  throw std::invalid_argument("expected an integer");
}

std::uint64_t as_u64(const Value& v) {
  if (v.text) {
    std::uint64_t x = 0;
    const char* end = v.text->data() + v.text->size();
    auto [p, ec] = std::from_chars(v.text->data(), end, x);
    if (ec != std::errc() || p != end) {
      throw std::invalid_argument("expected a non-negative integer, got '" +
                                  *v.text + "'");
    }
    return x;
  }
  const std::int64_t x = as_int(v);
  if (x < 0) throw std::invalid_argument("expected a non-negative integer");
  return static_cast<std::uint64_t>(x);
}

double as_double(const Value& v) {
  if (v.text) {
    try {
      std::size_t used = 0;
      const double x = std::stod(*v.text, &used);
      if (used == v.text->size()) return x;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("expected a number, got '" + *v.text + "'");
  }
  if (v.node->is_floating_point()) return *v.node->value<double>();
  if (v.node->is_integer()) {
    return static_cast<double>(*v.node->value<std::int64_t>());
  }
  throw std::invalid_argument("expected a number");
}

bool as_bool(const Value& v) {
  if (v.text) {
    if (*v.text == "true" || *v.text == "1" || v.text->empty()) return true;
    if (*v.text == "false" || *v.text == "0") return false;
    throw std::invalid_argument("expected true or false, got '" + *v.text + "'");
  }
  if (auto b = v.node->value<bool>()) return *b;
  throw std::invalid_argument("expected true or false");
}

std::vector<std::string> as_list(const Value& v) {
  if (v.text) return split_csv(*v.text);
  if (auto s = v.node->value<std::string>()) return split_csv(*s);
  if (const auto* arr = v.node->as_array()) {
    std::vector<std::string> out;
    for (const auto& item : *arr) {
      auto s = item.value<std::string>();
      if (!s) throw std::invalid_argument("expected a list of strings");
      out.push_back(*s);
    }
    return out;
  }
  throw std::invalid_argument("expected a list of strings");
}

fs::path as_path(const Value& v) {
  fs::path p = as_string(v);
  if (p.empty()) throw std::invalid_argument("empty path");
  return p.is_relative() && !v.base.empty() ? v.base / p : p;
}

int as_count(const Value& v, int min_value) {
  const std::int64_t x = as_int(v);
  if (x < min_value || x > 1 << 20) {
    throw std::invalid_argument("must be an integer >= " +
                                std::to_string(min_value));
  }
  return static_cast<int>(x);
}

struct Field {
  std::string name;
  std::function<void(RunConfig&, const Value&)> set;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"manifest", [](RunConfig& c, const Value& v) { c.manifest = as_path(v); }},
      {"out", [](RunConfig& c, const Value& v) { c.out = as_path(v); }},
      {"languages",
       [](RunConfig& c, const Value& v) {
         auto langs = as_list(v);
         for (const auto& l : langs) {
           if (!is_language_code(l)) {
             throw std::invalid_argument("'" + l + "' is not a language code");
           }
         }
         c.languages = std::move(langs);
       }},
      {"pairs",
       [](RunConfig& c, const Value& v) {
         std::vector<LanguagePair> pairs;
         for (const auto& p : as_list(v)) {
           try {
             pairs.push_back(LanguagePair::parse(p));
           } catch (const Error& e) {
             throw std::invalid_argument(e.what());
           }
         }
         c.pairs = std::move(pairs);
       }},
      {"pair_cap",
       [](RunConfig& c, const Value& v) {
         c.pair_cap = static_cast<std::size_t>(as_u64(v));
       }},
      {"workers", [](RunConfig& c, const Value& v) { c.workers = as_count(v, 1); }},
      {"seed", [](RunConfig& c, const Value& v) { c.generation.seed = as_u64(v); }},
      {"peak_dbfs", [](RunConfig& c, const Value& v) { c.peak_dbfs = as_double(v); }},
      {"low_hz", [](RunConfig& c, const Value& v) { c.low_hz = as_double(v); }},
      {"high_hz", [](RunConfig& c, const Value& v) { c.high_hz = as_double(v); }},
      {"min_reference_s",
       [](RunConfig& c, const Value& v) { c.min_reference_s = as_double(v); }},
      {"max_subs",
       [](RunConfig& c, const Value& v) { c.generation.n_max = as_count(v, 1); }},
      {"pos",
       [](RunConfig& c, const Value& v) {
         POSSet set;
         for (const auto& tag : as_list(v)) {
           auto pos = parse_pos(tag);
           if (!pos) throw std::invalid_argument("unknown POS '" + tag + "'");
           set.insert(*pos);
         }
         c.generation.pos_pool = set;
       }},
      {"matrix_policy",
       [](RunConfig& c, const Value& v) {
         try {
           c.generation.matrix_policy = parse_matrix_policy(as_string(v));
         } catch (const Error& e) {
           throw std::invalid_argument(e.what());
         }
       }},
      {"crossfade_ms",
       [](RunConfig& c, const Value& v) { c.generation.crossfade_ms = as_double(v); }},
      {"mapper", [](RunConfig& c, const Value& v) { c.mapper = as_string(v); }},
      {"aligner", [](RunConfig& c, const Value& v) { c.aligner = as_string(v); }},
      {"vc", [](RunConfig& c, const Value& v) { c.vc = as_string(v); }},
      {"lexicon", [](RunConfig& c, const Value& v) { c.lexicon = as_path(v); }},
      {"timeout_s", [](RunConfig& c, const Value& v) { c.timeout_s = as_double(v); }},
      {"mapper_in_flight",
       [](RunConfig& c, const Value& v) { c.mapper_in_flight = as_count(v, 1); }},
      {"aligner_in_flight",
       [](RunConfig& c, const Value& v) { c.aligner_in_flight = as_count(v, 1); }},
      {"vc_in_flight",
       [](RunConfig& c, const Value& v) { c.vc_in_flight = as_count(v, 1); }},
      {"aligner_romanized",
       [](RunConfig& c, const Value& v) { c.aligner_romanized = as_bool(v); }},
      {"mapping_cache",
       [](RunConfig& c, const Value& v) { c.mapping_cache = as_path(v); }},
      {"resume", [](RunConfig& c, const Value& v) { c.resume = as_bool(v); }},
      {"check_audio", [](RunConfig& c, const Value& v) { c.check_audio = as_bool(v); }},
  };
  return table;
}

const Field* find_field(std::string key) {
  for (auto& ch : key) {
    if (ch == '-') ch = '_';
  }
  for (const auto& f : fields()) {
    if (f.name == key) return &f;
  }
  return nullptr;
}

BackendEndpoint endpoint_for(const std::string& spec, double timeout_s,
                             int in_flight) {
  BackendEndpoint e = BackendEndpoint::parse(spec);
  e.timeout = std::chrono::milliseconds(
      static_cast<std::int64_t>(std::max(timeout_s, 0.001) * 1000.0));
  e.max_in_flight = in_flight;
  return e;
}

std::string quote(const std::string& s) {
  std::ostringstream out;
  out << toml::value<std::string>(s);
  return out.str();
}

}  // namespace

BackendEndpoint RunConfig::mapper_endpoint() const {
  return endpoint_for(mapper, timeout_s, mapper_in_flight);
}
BackendEndpoint RunConfig::aligner_endpoint() const {
  return endpoint_for(aligner, timeout_s, aligner_in_flight);
}
BackendEndpoint RunConfig::vc_endpoint() const {
  return endpoint_for(vc, timeout_s, vc_in_flight);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.name);
    return k;
  }();
  return keys;
}

ConfigLoad parse_config(const std::string& toml_text, const fs::path& base_dir) {
  ConfigLoad load;
  toml::table doc;
  try {
    doc = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config: " << e.description() << " (line " << e.source().begin.line
        << ")";
    load.diagnostics.push_back(msg.str());
    return load;
  }
  for (const auto& [key, node] : doc) {
    const std::string name(key.str());
    const Field* field = find_field(name);
    if (!field || name.find('-') != std::string::npos) {
      load.diagnostics.push_back(name + ": unknown key");
      continue;
    }
    try {
      field->set(load.config, Value{&node, nullptr, base_dir});
    } catch (const std::invalid_argument& e) {
      load.diagnostics.push_back(name + ": " + e.what());
    }
  }
  return load;
}

ConfigLoad load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ConfigLoad load;
    load.diagnostics.push_back("config: cannot read " + path.string());
    return load;
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), fs::absolute(path).parent_path());
}

std::string apply_override(RunConfig& config, const std::string& key,
                           const std::string& value) {
  const Field* field = find_field(key);
  if (!field) return key + ": unknown key";
  try {
    field->set(config, Value{nullptr, &value, {}});
  } catch (const std::invalid_argument& e) {
    return field->name + ": " + e.what();
  }
  return {};
}

std::vector<std::string> validate_config(const RunConfig& c) {
  std::vector<std::string> d;
  if (c.manifest.empty()) {
    d.push_back("manifest: not set");
  } else if (!fs::is_regular_file(c.manifest)) {
    d.push_back("manifest: file not found: " + c.manifest.string());
  }
  if (c.out.empty()) d.push_back("out: not set");
  if (!(c.low_hz > 0.0)) d.push_back("low_hz: must be positive");
  if (!(c.low_hz < c.high_hz)) {
    d.push_back("low_hz: must be below high_hz (" + std::to_string(c.low_hz) +
                " >= " + std::to_string(c.high_hz) + ")");
  }
  if (!(c.peak_dbfs <= 0.0)) d.push_back("peak_dbfs: must be <= 0");
  if (!(c.min_reference_s >= 0.0)) d.push_back("min_reference_s: must be >= 0");
  if (!(c.generation.crossfade_ms >= 0.0 && c.generation.crossfade_ms <= 20.0)) {
    d.push_back("crossfade_ms: must be between 0 and 20");
  }
  if (!(c.timeout_s > 0.0)) d.push_back("timeout_s: must be positive");
  if (c.generation.n_max < 1) d.push_back("max_subs: must be >= 1");
  if (c.workers < 1) d.push_back("workers: must be >= 1");
  if (c.generation.pos_pool.empty()) d.push_back("pos: empty category pool");
  if (c.pairs.empty() && !c.languages.empty()) {
    std::set<std::string> uniq(c.languages.begin(), c.languages.end());
    if (uniq.size() < 2) d.push_back("languages: need at least two languages");
  }
  for (const auto& [key, spec] : {std::pair{"mapper", c.mapper},
                                  std::pair{"aligner", c.aligner},
                                  std::pair{"vc", c.vc}}) {
    if (spec.empty()) d.push_back(std::string(key) + ": empty backend spec");
  }
  if (BackendEndpoint::parse(c.mapper).kind == EndpointKind::kBuiltin) {
    if (!c.lexicon) {
      d.push_back("lexicon: the builtin mapper needs a lexicon file or directory");
    } else if (!fs::exists(*c.lexicon)) {
      d.push_back("lexicon: not found: " + c.lexicon->string());
    }
  }
  return d;
}

std::string to_toml(const RunConfig& c) {
  std::ostringstream o;
  auto str_list = [](const std::vector<std::string>& items) {
    std::string s = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) s += ", ";
      s += quote(items[i]);
    }
    return s + "]";
  };
  std::vector<std::string> pairs;
  for (const auto& p : c.pairs) pairs.push_back(p.str());
  std::vector<std::string> pos;
  for (auto p : kAllPOS) {
    if (c.generation.pos_pool.contains(p)) pos.emplace_back(to_string(p));
  }
  o.precision(17);
  o << "manifest = " << quote(c.manifest.string()) << '\n'
    << "out = " << quote(c.out.string()) << '\n'
    << "languages = " << str_list(c.languages) << '\n'
    << "pairs = " << str_list(pairs) << '\n'
    << "pair_cap = " << c.pair_cap << '\n'
    << "workers = " << c.workers << '\n'
    << "seed = " << static_cast<std::int64_t>(c.generation.seed) << '\n'
    << "peak_dbfs = " << c.peak_dbfs << '\n'
    << "low_hz = " << c.low_hz << '\n'
    << "high_hz = " << c.high_hz << '\n'
    << "min_reference_s = " << c.min_reference_s << '\n'
    << "max_subs = " << c.generation.n_max << '\n'
    << "pos = " << str_list(pos) << '\n'
    << "matrix_policy = " << quote(std::string(to_string(c.generation.matrix_policy)))
    << '\n'
    << "crossfade_ms = " << c.generation.crossfade_ms << '\n'
    << "mapper = " << quote(c.mapper) << '\n'
    << "aligner = " << quote(c.aligner) << '\n'
    << "vc = " << quote(c.vc) << '\n';
  if (c.lexicon) o << "lexicon = " << quote(c.lexicon->string()) << '\n';
  o << "timeout_s = " << c.timeout_s << '\n'
    << "mapper_in_flight = " << c.mapper_in_flight << '\n'
    << "aligner_in_flight = " << c.aligner_in_flight << '\n'
    << "vc_in_flight = " << c.vc_in_flight << '\n'
    << "aligner_romanized = " << (c.aligner_romanized ? "true" : "false") << '\n';
  if (c.mapping_cache) {
    o << "mapping_cache = " << quote(c.mapping_cache->string()) << '\n';
  }
  o << "resume = " << (c.resume ? "true" : "false") << '\n'
    << "check_audio = " << (c.check_audio ? "true" : "false") << '\n';
  return o.str();
}

}  // namespace csforge
