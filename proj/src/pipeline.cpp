// src/pipeline.cpp

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

#include "csforge/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <thread>
#include <unordered_map>

#include "csforge/alignment.hpp"
#include "csforge/audio.hpp"
#include "csforge/error.hpp"
#include "csforge/lexicon.hpp"
#include "csforge/style_unify.hpp"
#include "csforge/swords.hpp"
#include "csforge/word_mapping.hpp"

namespace csforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kOkStatus = "ok";
constexpr const char* kDegenerateFlag = "degenerate_conversion";

struct Task {
  LanguagePair pair;
  const Utterance* a = nullptr;  // lang_a side
  const Utterance* b = nullptr;
  std::string key;
};

struct Outcome {
  bool done = false;
  std::string line;    // manifest line when status is ok
  std::string status;  // "ok" or a skip reason
  std::string detail;
};

// Raw mapper documents keyed by (lang_a, lang_b, text_a, text_b), persisted
// as JSONL so reruns and resumes do not query the mapper again.
class MappingCache {
 public:
  explicit MappingCache(const fs::path& path) {
    if (std::ifstream in(path); in) {
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
          json row = json::parse(line);
          entries_[row.at("key").dump()] = row.at("response");
        } catch (const json::exception&) {
          // a torn last line from an interrupted run
        }
      }
    }
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    out_.open(path, std::ios::app);
    if (!out_) fail(ErrorCode::kIoError, "cannot open mapping cache " + path.string());
  }

  std::optional<json> find(const json& key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key.dump());
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void store(const json& key, const json& response) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!entries_.emplace(key.dump(), response).second) return;
    out_ << json{{"key", key}, {"response", response}}.dump() << '\n';
    out_.flush();
  }

 private:
  std::mutex mu_;
  std::unordered_map<std::string, json> entries_;
  std::ofstream out_;
};

struct Backends {
  std::unique_ptr<MapperBackend> mapper;
  std::unique_ptr<AlignerBackend> aligner;
  std::unique_ptr<ConverterBackend> converter;
};

Backends open_backends(const RunConfig& c) {
  Backends b;
  const BackendEndpoint m = c.mapper_endpoint();
  if (m.kind == EndpointKind::kBuiltin) {
    b.mapper = std::make_unique<LexiconMapper>(*c.lexicon);
  } else {
    b.mapper = std::make_unique<ProtocolMapper>(open_channel(m));
  }
  const BackendEndpoint a = c.aligner_endpoint();
  if (a.kind == EndpointKind::kBuiltin) {
    b.aligner = std::make_unique<UniformAligner>();
  } else {
    b.aligner =
        std::make_unique<ProtocolAligner>(open_channel(a), c.aligner_romanized);
  }
  const BackendEndpoint v = c.vc_endpoint();
  if (v.kind == EndpointKind::kBuiltin) {
    b.converter = std::make_unique<IdentityConverter>();
  } else {
    b.converter = std::make_unique<ProtocolConverter>(open_channel(v));
  }
  return b;
}

class RecordWorker {
 public:
  RecordWorker(const RunConfig& config, Backends& backends, MappingCache* cache)
      : c_(config), backends_(backends), cache_(cache) {}

  Outcome process(const Task& task) const {
    Outcome out;
    out.done = true;
    try {
      out.line = generate(task);
      out.status = kOkStatus;
    } catch (const Error& e) {
      out.status = std::string(to_string(e.code()));
      out.detail = e.what();
    } catch (const std::exception& e) {
      out.status = "InternalError";
      out.detail = e.what();
    }
    return out;
  }

 private:
  AudioBuffer preprocess(const Utterance& u) const {
    return normalize_amplitude(
        bandpass_filter(read_wav(u.audio_path), c_.low_hz, c_.high_hz),
        c_.peak_dbfs);
  }

  json mapping(const Utterance& a, const Utterance& b) const {
    if (!cache_) {
      return request_mapping(*backends_.mapper, a.language, b.language,
                             a.transcript, b.transcript);
    }
    const json key = json::array({a.language, b.language, a.transcript, b.transcript});
    if (auto hit = cache_->find(key)) return *hit;
    json doc = request_mapping(*backends_.mapper, a.language, b.language,
                               a.transcript, b.transcript);
    cache_->store(key, doc);
    return doc;
  }

  std::string generate(const Task& task) const {
    const Utterance& ua = *task.a;
    const Utterance& ub = *task.b;
    const AudioBuffer audio_a = preprocess(ua);
    const AudioBuffer audio_b = preprocess(ub);

    const PostprocessResult mapped =
        postprocess_mapping(mapping(ua, ub), ua.transcript, ub.transcript);
    const auto align_a = align(*backends_.aligner, audio_a, ua.transcript, ua.language);
    const auto align_b = align(*backends_.aligner, audio_b, ub.transcript, ub.language);

    Rng rng(record_seed(c_.generation.seed, ua.sentence_id, task.pair));
    GeneratedSample sample =
        generate_cs_sample(SourceUtterance{ua, audio_a, align_a},
                           SourceUtterance{ub, audio_b, align_b}, mapped.map,
                           c_.generation, rng);
    CSRecord& rec = sample.record;

    const AudioBuffer& reference = rec.matrix_lang == ua.language ? audio_a : audio_b;
    StyleOptions style;
    style.target_peak_dbfs = c_.peak_dbfs;
    style.min_reference_s = c_.min_reference_s;
    AudioBuffer final_audio;
    try {
      final_audio = unify_style(*backends_.converter, {sample.audio, reference}, style);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateConversion) throw;
      final_audio = normalize_amplitude(sample.audio, c_.peak_dbfs);
      rec.flags.push_back(kDegenerateFlag);
    }

    rec.audio_path = "audio/" + rec.record_id + ".wav";
    rec.duration_s = final_audio.duration_seconds();
    const fs::path wav = c_.out / rec.audio_path;
    const fs::path tmp = wav.string() + ".tmp";
    write_wav(final_audio, tmp);
    std::error_code ec;
    fs::rename(tmp, wav, ec);
    if (ec) fail(ErrorCode::kIoError, "cannot move " + tmp.string() + ": " + ec.message());
    return rec.to_json().dump();
  }

  const RunConfig& c_;
  Backends& backends_;
  MappingCache* cache_;
};

struct ResumeState {
  std::unordered_map<std::string, std::pair<std::string, std::string>> status;
  std::unordered_map<std::string, std::string> lines;
};

ResumeState load_resume_state(const fs::path& out) {
  ResumeState st;
  if (std::ifstream in(out / "done.log"); in) {
    std::string line;
    while (std::getline(in, line)) {
      const auto t1 = line.find('\t');
      if (t1 == std::string::npos) continue;
      const auto t2 = line.find('\t', t1 + 1);
      const std::string key = line.substr(0, t1);
      const std::string status =
          line.substr(t1 + 1, t2 == std::string::npos ? std::string::npos : t2 - t1 - 1);
      const std::string detail = t2 == std::string::npos ? "" : line.substr(t2 + 1);
      if (!status.empty()) st.status[key] = {status, detail};
    }
  }
  if (std::ifstream in(out / "manifest.jsonl"); in) {
    std::string line;
    while (std::getline(in, line)) {
      try {
        const json j = json::parse(line);
        const auto pair = LanguagePair::make(j.at("matrix_lang").get<std::string>(),
                                             j.at("embedded_lang").get<std::string>());
        st.lines[task_key(j.at("sentence_id").get<std::string>(), pair)] = line;
      } catch (const std::exception&) {
        // torn line; the task is redone
      }
    }
  }
  return st;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\t', ' ');
  return s;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
}

}  // namespace

std::size_t RunSummary::total_skipped() const {
  std::size_t n = 0;
  for (const auto& [reason, count] : skipped) n += count;
  return n;
}

std::string task_key(const std::string& sentence_id, const LanguagePair& pair) {
  return sentence_id + "|" + pair.str();
}

std::vector<CSRecord> read_output_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot read " + path.string());
  std::vector<CSRecord> records;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      records.push_back(CSRecord::from_json(json::parse(line)));
    } catch (const json::exception& e) {
      fail(ErrorCode::kManifestParseError,
           "line " + std::to_string(n) + ": " + e.what());
    } catch (const Error& e) {
      fail(ErrorCode::kManifestParseError,
           "line " + std::to_string(n) + ": " + e.what());
    }
  }
  return records;
}

RunSummary run_pipeline(const RunConfig& config, std::ostream* log) {
  const auto t0 = std::chrono::steady_clock::now();
  if (auto diags = validate_config(config); !diags.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& d : diags) msg += "\n  " + d;
    fail(ErrorCode::kConfigError, msg);
  }

  // Language set and pair list.
  std::set<std::string> languages(config.languages.begin(), config.languages.end());
  std::vector<LanguagePair> pairs = config.pairs;
  if (!pairs.empty()) {
    languages.clear();
    for (const auto& p : pairs) {
      languages.insert(p.lang_a);
      languages.insert(p.lang_b);
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  }
  ManifestOptions mopts;
  mopts.languages = languages;
  mopts.check_audio = config.check_audio;
  const Corpus corpus = load_manifest(config.manifest, mopts);
  if (pairs.empty()) {
    if (languages.empty()) languages = corpus.languages();
    pairs = enumerate_language_pairs(languages);
  }

  RunSummary summary;
  summary.n_pairs = pairs.size();
  summary.missing_audio = corpus.missing_audio.size();
  summary.rows_outside_language_set = corpus.rows_outside_language_set;

  // Task list in a fixed order: pairs sorted, sentences shuffled per pair.
  std::vector<SampledPairs> sampled;
  sampled.reserve(pairs.size());
  std::vector<Task> tasks;
  for (const auto& pair : pairs) {
    Rng rng(derive_seed(config.generation.seed, {"pairs", pair.str()}));
    sampled.push_back(sample_equivalent_pairs(corpus, pair, rng));
    SampledPairs& sp = sampled.back();
    summary.partial_groups += sp.partial_groups;
    if (config.pair_cap > 0 && sp.pairs.size() > config.pair_cap) {
      sp.pairs.resize(config.pair_cap);
    }
    for (const auto& [ua, ub] : sp.pairs) {
      tasks.push_back({pair, &ua, &ub, task_key(ua.sentence_id, pair)});
    }
  }
  summary.attempted = tasks.size();
  if (log) {
    *log << "csforge: " << corpus.groups.size() << " sentence groups, "
         << pairs.size() << " language pairs, " << tasks.size() << " tasks\n";
  }

  fs::create_directories(config.out / "audio");
  std::vector<Outcome> outcomes(tasks.size());
  if (config.resume) {
    const ResumeState prev = load_resume_state(config.out);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      auto st = prev.status.find(tasks[i].key);
      if (st == prev.status.end()) continue;
      const auto& [status, detail] = st->second;
      if (status != kOkStatus) {
        outcomes[i] = {true, "", status, detail};
        ++summary.reused;
        continue;
      }
      auto line = prev.lines.find(tasks[i].key);
      if (line == prev.lines.end()) continue;
      try {
        const CSRecord rec = CSRecord::from_json(json::parse(line->second));
        if (!fs::exists(config.out / rec.audio_path)) continue;
      } catch (const std::exception&) {
        continue;
      }
      outcomes[i] = {true, line->second, kOkStatus, ""};
      ++summary.reused;
    }
  }

  Backends backends = open_backends(config);
  std::unique_ptr<MappingCache> cache;
  if (config.mapping_cache) cache = std::make_unique<MappingCache>(*config.mapping_cache);
  const RecordWorker worker(config, backends, cache.get());

  std::ofstream manifest(config.out / "manifest.jsonl", std::ios::binary | std::ios::trunc);
  std::ofstream done(config.out / "done.log",
                     std::ios::binary | (config.resume ? std::ios::app : std::ios::trunc));
  if (!manifest || !done) fail(ErrorCode::kIoError, "cannot write to " + config.out.string());

  // Workers claim tasks in order but may finish out of order; the writer
  // below emits strictly in task order. The claim window bounds how far
  // workers can run ahead of the writer.
  std::mutex mu;
  std::condition_variable cv;
  std::size_t next_claim = 0, written = 0;
  const std::size_t window = static_cast<std::size_t>(config.workers) * 4 + 8;
  auto work = [&] {
    for (;;) {
      std::size_t idx;
      {
        std::unique_lock<std::mutex> lock(mu);
        cv.wait(lock, [&] {
          return next_claim >= tasks.size() || next_claim < written + window;
        });
        while (next_claim < tasks.size() && outcomes[next_claim].done) ++next_claim;
        if (next_claim >= tasks.size()) return;
        idx = next_claim++;
      }
      Outcome o = worker.process(tasks[idx]);
      {
        std::lock_guard<std::mutex> lock(mu);
        outcomes[idx] = std::move(o);
      }
      cv.notify_all();
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < config.workers; ++w) pool.emplace_back(work);

  const std::size_t progress_every = std::max<std::size_t>(tasks.size() / 10, 100);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    Outcome o;
    {
      std::unique_lock<std::mutex> lock(mu);
      cv.wait(lock, [&] { return outcomes[i].done; });
      o = std::move(outcomes[i]);
      outcomes[i] = Outcome{true, "", "", ""};
      written = i + 1;
    }
    cv.notify_all();
    if (o.status == kOkStatus) {
      manifest << o.line << '\n';
      manifest.flush();
      ++summary.emitted;
    } else {
      ++summary.skipped[o.status];
    }
    done << tasks[i].key << '\t' << o.status << '\t' << one_line(o.detail) << '\n';
    done.flush();
    if (log && (i + 1) % progress_every == 0) {
      *log << "csforge: " << i + 1 << "/" << tasks.size() << " tasks, "
           << summary.emitted << " emitted\n";
    }
  }
  for (auto& t : pool) t.join();
  manifest.close();
  done.close();
  if (!manifest || !done) fail(ErrorCode::kIoError, "error writing to " + config.out.string());

  // Statistics come from the written manifest alone.
  const auto records = read_output_manifest(config.out / "manifest.jsonl");
  summary.stats = aggregate_stats(records);
  summary.stats.skips = summary.skipped;
  write_text(config.out / "stats.json", summary.stats.to_json().dump(2) + "\n");
  write_text(config.out / "pairs.csv", summary.stats.per_pair_csv());

  nlohmann::ordered_json missing = nlohmann::ordered_json::array();
  for (const auto& m : corpus.missing_audio) {
    missing.push_back({{"line", m.line}, {"utt_id", m.utt_id},
                       {"audio_path", m.audio_path.string()}});
  }
  nlohmann::ordered_json skipped = nlohmann::ordered_json::object();
  for (const auto& [reason, n] : summary.skipped) skipped[reason] = n;
  const nlohmann::ordered_json report{
      {"language_pairs", summary.n_pairs},
      {"attempted", summary.attempted},
      {"emitted", summary.emitted},
      {"skipped", std::move(skipped)},
      {"partial_groups", summary.partial_groups},
      {"rows_outside_language_set", summary.rows_outside_language_set},
      {"missing_audio", std::move(missing)},
  };
  write_text(config.out / "skip_report.json", report.dump(2) + "\n");
  write_text(config.out / "run_config.toml", to_toml(config));

  summary.elapsed_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (log) {
    *log << "csforge: " << summary.emitted << " emitted, " << summary.total_skipped()
         << " skipped of " << summary.attempted << " in " << summary.elapsed_s
         << " s\n";
  }
  return summary;
}

}  // namespace csforge
