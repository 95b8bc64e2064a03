// tests/backend_test.cpp

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <thread>

#include "csforge/alignment.hpp"
#include "csforge/backend.hpp"
#include "csforge/error.hpp"
#include "csforge/reference_server.hpp"
#include "csforge/style_unify.hpp"
#include "csforge/word_mapping.hpp"
#include "fixture.hpp"

using namespace csforge;
using nlohmann::json;
using namespace std::chrono_literals;

namespace {

const std::string kEn =
    "Hiking is an outdoor activity which consists of walking in natural "
    "environments, often on hiking trails.";
const std::string kNl =
    "Wandelen is een buitenactiviteit waarbij je in een natuurlijke omgeving "
    "wandelt, meestal op wandelpaden.";

std::string lexicon() { return std::string(CSFORGE_TEST_DATA) + "/hiking/en-nl.tsv"; }

std::string cli_command(const std::string& kind, const std::string& extra = {}) {
  return std::string("'") + CSFORGE_CLI + "' serve-reference --kind " + kind + extra;
}

BackendEndpoint endpoint(const std::string& spec, std::chrono::milliseconds timeout = 20s) {
  auto e = BackendEndpoint::parse(spec);
  e.timeout = timeout;
  return e;
}

std::optional<ErrorCode> code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

AudioBuffer chirp(std::size_t n) {
  std::vector<float> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<float>(0.5 * std::sin(0.01 * i * i));
  return {std::move(s), 16000};
}

// In-process HTTP server answering with the reference backends.
class TestServer {
 public:
  explicit TestServer(std::function<json(const json&)> handler) {
    server_.Post(R"(/.*)", [handler](const httplib::Request& req, httplib::Response& res) {
      res.set_content(handler(json::parse(req.body)).dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~TestServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/rpc"; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST_CASE("endpoint specs") {
  CHECK(BackendEndpoint::parse("builtin").kind == EndpointKind::kBuiltin);
  const auto h = BackendEndpoint::parse("http://localhost:8080/map");
  CHECK(h.kind == EndpointKind::kHttp);
  CHECK(h.target == "http://localhost:8080/map");
  const auto c = BackendEndpoint::parse("cmd:python3 serve.py");
  CHECK(c.kind == EndpointKind::kCommand);
  CHECK(c.target == "python3 serve.py");
  CHECK(BackendEndpoint::parse("./mapper --x").kind == EndpointKind::kCommand);
  CHECK(code_of([] { open_channel(BackendEndpoint::parse("builtin")); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("reference server dispatches by kind and reports errors as objects") {
  auto backends = make_reference_backends(std::filesystem::path(lexicon()));
  const json bad = handle_protocol_request(backends, json{{"kind", "poem"}});
  CHECK(bad.contains("error"));
  CHECK(code_of([&] { protocol::check_response(bad); }) == ErrorCode::kBackendError);
  const json wrong = handle_protocol_request(
      backends, make_vc_request(chirp(100), chirp(100)), "align");
  CHECK(wrong.contains("error"));
  CHECK(code_of([] { protocol::check_response(json::array()); }) ==
        ErrorCode::kBackendMalformedResponse);
  auto no_lex = make_reference_backends(std::nullopt);
  CHECK(handle_protocol_request(no_lex, MappingRequest{"en", "nl", kEn, kNl,
                                                       build_mapping_prompts("en", "nl", kEn, kNl)}
                                            .to_json())
            .contains("error"));
}

TEST_CASE("subprocess backends give the same answers as the builtins") {
  SUBCASE("word_map") {
    ProtocolMapper remote(open_channel(endpoint(cli_command("word_map", " --lexicon '" + lexicon() + "'"))));
    auto backends = make_reference_backends(std::filesystem::path(lexicon()));
    const json local = request_mapping(*backends.mapper, "en", "nl", kEn, kNl);
    CHECK(request_mapping(remote, "en", "nl", kEn, kNl) == local);
    CHECK(request_mapping(remote, "en", "nl", kEn, kNl) == local);  // channel is reused
  }
  SUBCASE("align") {
    ProtocolAligner remote(open_channel(endpoint(cli_command("align"))), true);
    UniformAligner local;
    const AudioBuffer audio = chirp(16001);
    CHECK(align(remote, audio, kEn, "en") == align(local, audio, kEn, "en"));
  }
  SUBCASE("vc") {
    ProtocolConverter remote(open_channel(endpoint(cli_command("vc"))));
    const AudioBuffer in = chirp(8000);
    CHECK(remote.convert(in, chirp(40000)) == in);
  }
}

TEST_CASE("http backends") {
  auto backends = make_reference_backends(std::filesystem::path(lexicon()));
  TestServer server([&](const json& req) { return handle_protocol_request(backends, req); });
  ProtocolMapper mapper(open_channel(endpoint(server.url())));
  CHECK(request_mapping(mapper, "en", "nl", kEn, kNl) ==
        request_mapping(*backends.mapper, "en", "nl", kEn, kNl));
  ProtocolConverter vc(open_channel(endpoint(server.url())));
  const AudioBuffer in = chirp(1234);
  CHECK(vc.convert(in, in) == in);

  TestServer erroring([](const json&) { return protocol::error_object("Busy", "try later"); });
  ProtocolConverter failing(open_channel(endpoint(erroring.url())));
  CHECK(code_of([&] { failing.convert(in, in); }) == ErrorCode::kBackendError);

  TestServer garbage([](const json&) { return json("not an object"); });
  ProtocolConverter malformed(open_channel(endpoint(garbage.url())));
  CHECK(code_of([&] { malformed.convert(in, in); }) == ErrorCode::kBackendMalformedResponse);
}

TEST_CASE("transport failures map to backend error codes") {
  const json ping = {{"kind", "vc"}};
  CHECK(code_of([&] { open_channel(endpoint("http://127.0.0.1:1/x", 2s))->exchange(ping); }) ==
        ErrorCode::kBackendUnavailable);
  CHECK(code_of([&] { open_channel(endpoint("exit 0", 5s))->exchange(ping); }) ==
        ErrorCode::kBackendUnavailable);
  CHECK(code_of([&] { open_channel(endpoint("sleep 30", 300ms))->exchange(ping); }) ==
        ErrorCode::kBackendTimeout);
  CHECK(code_of([&] { open_channel(endpoint("read l; echo garbage; sleep 5", 5s))->exchange(ping); }) ==
        ErrorCode::kBackendMalformedResponse);
  CHECK(code_of([&] {
          open_channel(endpoint(R"(read l; echo '{"error":{"code":"X","message":"m"}}')", 5s))
              ->exchange(ping);
        }) == ErrorCode::kBackendError);
}

TEST_CASE("subprocess channel serves concurrent callers") {
  auto channel = open_channel(endpoint(cli_command("vc")));
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 10; ++i) {
        const AudioBuffer in = chirp(100 + static_cast<std::size_t>(t * 10 + i));
        const auto out = parse_vc_response(channel->exchange(make_vc_request(in, in)), 16000);
        if (out == in) ++ok;
      }
    });
  }
  for (auto& th : threads) th.join();
  CHECK(ok == 40);
}
