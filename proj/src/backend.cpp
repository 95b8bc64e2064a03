// src/backend.cpp

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

#include "csforge/backend.hpp"

#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <boost/beast/core/detail/base64.hpp>
#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <httplib.h>
#include <mutex>
#include <semaphore>
#include <thread>
#include <vector>

#include "csforge/error.hpp"

extern char** environ;

namespace csforge {

namespace {

using nlohmann::json;
namespace base64 = boost::beast::detail::base64;

json parse_response(const std::string& body, const std::string& origin) {
  json response;
  try {
    response = json::parse(body);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kBackendMalformedResponse,
         origin + " sent a non-JSON response: " + e.what());
  }
  protocol::check_response(response);
  return response;
}

class HttpChannel final : public JsonChannel {
 public:
  explicit HttpChannel(const BackendEndpoint& endpoint)
      : url_(endpoint.target),
        timeout_(endpoint.timeout),
        slots_(std::max(1, endpoint.max_in_flight)) {
    const auto scheme_end = url_.find("://");
    const auto path_begin = url_.find('/', scheme_end + 3);
    if (path_begin == std::string::npos) {
      origin_ = url_;
      path_ = "/";
    } else {
      origin_ = url_.substr(0, path_begin);
      path_ = url_.substr(path_begin);
    }
  }

  json exchange(const json& request) override {
    slots_.acquire();
    struct Release {
      std::counting_semaphore<1024>& s;
      ~Release() { s.release(); }
    } release{slots_};

    httplib::Client client(origin_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs =
        std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    auto result = client.Post(path_, request.dump(), "application/json");
    if (!result) {
      const auto err = result.error();
      if (err == httplib::Error::Read || err == httplib::Error::Write ||
          err == httplib::Error::ConnectionTimeout) {
        fail(err == httplib::Error::ConnectionTimeout
                 ? ErrorCode::kBackendUnavailable
                 : ErrorCode::kBackendTimeout,
             url_ + ": " + httplib::to_string(err));
      }
      fail(ErrorCode::kBackendUnavailable,
           url_ + ": " + httplib::to_string(err));
    }
    if (result->status >= 500 && result->body.empty()) {
      fail(ErrorCode::kBackendUnavailable,
           url_ + " answered HTTP " + std::to_string(result->status));
    }
    return parse_response(result->body, url_);
  }

 private:
  std::string url_, origin_, path_;
  std::chrono::milliseconds timeout_;
  std::counting_semaphore<1024> slots_;
};

class ProcessChannel final : public JsonChannel {
 public:
  explicit ProcessChannel(const BackendEndpoint& endpoint)
      : command_(endpoint.target),
        timeout_(endpoint.timeout),
        max_children_(std::max(1, endpoint.max_in_flight)) {}

  ~ProcessChannel() override {
    for (auto& child : idle_) reap(*child);
  }

  json exchange(const json& request) override {
    std::unique_ptr<Child> child = acquire();
    try {
      send_line(*child, request.dump());
      const std::string line = read_line(*child);
      json response = parse_response(line, "'" + command_ + "'");
      release(std::move(child));
      return response;
    } catch (const Error& e) {
      // Protocol-level errors leave the child usable; anything else kills it.
      if (e.code() == ErrorCode::kBackendError) {
        release(std::move(child));
      } else {
        discard(std::move(child));
      }
      throw;
    }
  }

 private:
  struct Child {
    pid_t pid = -1;
    int fd = -1;
    std::string buffer;
  };

  std::unique_ptr<Child> acquire() {
    {
      std::unique_lock lock(mu_);
      cv_.wait(lock, [&] { return !idle_.empty() || live_ < max_children_; });
      if (!idle_.empty()) {
        auto child = std::move(idle_.back());
        idle_.pop_back();
        return child;
      }
      ++live_;
    }
    try {
      return spawn();
    } catch (...) {
      std::lock_guard lock(mu_);
      --live_;
      cv_.notify_one();
      throw;
    }
  }

  void release(std::unique_ptr<Child> child) {
    std::lock_guard lock(mu_);
    idle_.push_back(std::move(child));
    cv_.notify_one();
  }

  void discard(std::unique_ptr<Child> child) {
    reap(*child);
    std::lock_guard lock(mu_);
    --live_;
    cv_.notify_one();
  }

  std::unique_ptr<Child> spawn() {
    int sv[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
      fail(ErrorCode::kBackendUnavailable,
           std::string("socketpair failed: ") + std::strerror(errno));
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, sv[1], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, sv[1], STDOUT_FILENO);
    std::string sh = "/bin/sh", dash_c = "-c", cmd = command_;
    char* argv[] = {sh.data(), dash_c.data(), cmd.data(), nullptr};
    // Own process group, so reaping also stops anything the command forked.
    posix_spawnattr_t attr;
    posix_spawnattr_init(&attr);
    posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
    posix_spawnattr_setpgroup(&attr, 0);
    pid_t pid = -1;
    const int rc =
        ::posix_spawn(&pid, "/bin/sh", &actions, &attr, argv, environ);
    posix_spawnattr_destroy(&attr);
    posix_spawn_file_actions_destroy(&actions);
    ::close(sv[1]);
    if (rc != 0) {
      ::close(sv[0]);
      fail(ErrorCode::kBackendUnavailable,
           "cannot spawn '" + command_ + "': " + std::strerror(rc));
    }
    auto child = std::make_unique<Child>();
    child->pid = pid;
    child->fd = sv[0];
    return child;
  }

  void send_line(Child& child, std::string payload) {
    payload.push_back('\n');
    std::size_t sent = 0;
    while (sent < payload.size()) {
      const ssize_t n = ::send(child.fd, payload.data() + sent,
                               payload.size() - sent, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        fail(ErrorCode::kBackendUnavailable,
             "'" + command_ + "' is not accepting requests: " +
                 std::strerror(errno));
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  std::string read_line(Child& child) {
    const auto deadline = std::chrono::steady_clock::now() + timeout_;
    char chunk[65536];
    for (;;) {
      if (auto nl = child.buffer.find('\n'); nl != std::string::npos) {
        std::string line = child.buffer.substr(0, nl);
        child.buffer.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) {
        fail(ErrorCode::kBackendTimeout,
             "'" + command_ + "' did not answer within " +
                 std::to_string(timeout_.count()) + " ms");
      }
      pollfd pfd{child.fd, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
      if (ready < 0 && errno == EINTR) continue;
      if (ready == 0) continue;  // deadline check above fires next
      const ssize_t n = ::read(child.fd, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        fail(ErrorCode::kBackendUnavailable,
             "'" + command_ + "': " + std::strerror(errno));
      }
      if (n == 0) {
        fail(ErrorCode::kBackendUnavailable,
             "'" + command_ + "' exited before answering");
      }
      child.buffer.append(chunk, static_cast<std::size_t>(n));
    }
  }

  static void reap(Child& child) {
    if (child.fd >= 0) ::close(child.fd);
    child.fd = -1;
    if (child.pid <= 0) return;
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(child.pid, nullptr, WNOHANG) == child.pid) {
        ::kill(-child.pid, SIGKILL);  // leftovers of the group, if any
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ::kill(-child.pid, SIGKILL);
    ::waitpid(child.pid, nullptr, 0);
  }

  std::string command_;
  std::chrono::milliseconds timeout_;
  int max_children_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<std::unique_ptr<Child>> idle_;
  int live_ = 0;
};

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

}  // namespace

BackendEndpoint BackendEndpoint::parse(std::string_view spec) {
  BackendEndpoint e;
  while (!spec.empty() && spec.front() == ' ') spec.remove_prefix(1);
  while (!spec.empty() && spec.back() == ' ') spec.remove_suffix(1);
  if (spec.empty() || spec == "builtin") {
    e.kind = EndpointKind::kBuiltin;
  } else if (starts_with(spec, "http://") || starts_with(spec, "https://")) {
    e.kind = EndpointKind::kHttp;
    e.target = std::string(spec);
  } else {
    if (starts_with(spec, "cmd:")) spec.remove_prefix(4);
    e.kind = EndpointKind::kCommand;
    e.target = std::string(spec);
  }
  return e;
}

std::string BackendEndpoint::describe() const {
  switch (kind) {
    case EndpointKind::kBuiltin: return "builtin";
    case EndpointKind::kHttp: return target;
    case EndpointKind::kCommand: return "cmd:" + target;
  }
  return "builtin";
}

std::unique_ptr<JsonChannel> open_channel(const BackendEndpoint& endpoint) {
  switch (endpoint.kind) {
    case EndpointKind::kHttp:
      return std::make_unique<HttpChannel>(endpoint);
    case EndpointKind::kCommand:
      return std::make_unique<ProcessChannel>(endpoint);
    case EndpointKind::kBuiltin:
      break;
  }
  fail(ErrorCode::kInvalidArgument, "builtin endpoints have no channel");
}

namespace protocol {

std::string encode_audio(const AudioBuffer& buf) {
  std::vector<unsigned char> raw(buf.size() * 4);
  auto samples = buf.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::uint32_t bits;
    std::memcpy(&bits, &samples[i], 4);
    for (int k = 0; k < 4; ++k) {
      raw[4 * i + k] = static_cast<unsigned char>((bits >> (8 * k)) & 0xFF);
    }
  }
  std::string out(base64::encoded_size(raw.size()), '\0');
  out.resize(base64::encode(out.data(), raw.data(), raw.size()));
  return out;
}

AudioBuffer decode_audio(std::string_view b64, int sample_rate) {
  if (b64.size() % 4 != 0) {
    fail(ErrorCode::kBackendMalformedResponse, "audio payload is not base64");
  }
  std::vector<unsigned char> raw(base64::decoded_size(b64.size()));
  // The decoder stops at '=' padding, which may only close the payload.
  std::size_t padding = 0;
  while (padding < 2 && padding < b64.size() &&
         b64[b64.size() - 1 - padding] == '=') {
    ++padding;
  }
  auto [written, read] = base64::decode(raw.data(), b64.data(), b64.size());
  if (read != b64.size() - padding || written % 4 != 0) {
    fail(ErrorCode::kBackendMalformedResponse,
         "audio payload is not base64 float32");
  }
  std::vector<float> samples(written / 4);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::uint32_t bits = 0;
    for (int k = 0; k < 4; ++k) {
      bits |= static_cast<std::uint32_t>(raw[4 * i + k]) << (8 * k);
    }
    std::memcpy(&samples[i], &bits, 4);
  }
  if (sample_rate <= 0) {
    fail(ErrorCode::kBackendMalformedResponse, "sample_rate must be positive");
  }
  return AudioBuffer(std::move(samples), sample_rate);
}

json error_object(std::string_view code, std::string_view message) {
  return json{{"error", {{"code", code}, {"message", message}}}};
}

void check_response(const json& response) {
  if (!response.is_object()) {
    fail(ErrorCode::kBackendMalformedResponse,
         "response is not a JSON object");
  }
  if (auto it = response.find("error"); it != response.end()) {
    std::string code = "unknown", message;
    if (it->is_object()) {
      code = it->value("code", code);
      message = it->value("message", message);
    } else if (it->is_string()) {
      message = it->get<std::string>();
    }
    fail(ErrorCode::kBackendError, code + ": " + message);
  }
}

}  // namespace protocol

}  // namespace csforge
