// Copyright 2026 The hocforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hocforge/scorer_client.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <json.hpp>
#include <mutex>
#include <regex>
#include <thread>

#include "hocforge/error.hpp"
#include "hocforge/png_io.hpp"

extern char** environ;

namespace hocforge {
namespace {

using Clock = std::chrono::steady_clock;

std::string errno_text() { return std::strerror(errno); }

// Writing to a dead peer must surface as an error, not kill the process.
void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

/// Line framing over a read fd and a write fd (possibly the same socket).
class FdLineChannel : public LineChannel {
 public:
  FdLineChannel(int read_fd, int write_fd) : read_fd_(read_fd), write_fd_(write_fd) {}

  ~FdLineChannel() override { close_fds(); }

  void write_line(std::string_view line) override {
    std::string framed(line);
    framed.push_back('\n');
    std::size_t off = 0;
    while (off < framed.size()) {
      const ssize_t n = ::write(write_fd_, framed.data() + off, framed.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ProtocolError("scorer channel write failed: " + errno_text());
      }
      off += static_cast<std::size_t>(n);
    }
  }

  std::string read_line(std::chrono::milliseconds timeout) override {
    const auto deadline = Clock::now() + timeout;
    while (true) {
      const auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return line;
      }
      const auto left =
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
      if (left.count() <= 0) throw Timeout("scorer did not answer within the timeout");
      pollfd pfd{read_fd_, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
      if (ready < 0) {
        if (errno == EINTR) continue;
        throw ProtocolError("scorer channel poll failed: " + errno_text());
      }
      if (ready == 0) continue;
      char chunk[65536];
      const ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        throw ProtocolError("scorer channel read failed: " + errno_text());
      }
      if (n == 0) throw ProtocolError("scorer closed the connection");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 protected:
  void close_fds() {
    if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
    if (read_fd_ >= 0) ::close(read_fd_);
    read_fd_ = write_fd_ = -1;
  }

 private:
  int read_fd_;
  int write_fd_;
  std::string buffer_;
};

class SubprocessChannel final : public FdLineChannel {
 public:
  SubprocessChannel(int read_fd, int write_fd, pid_t pid) : FdLineChannel(read_fd, write_fd), pid_(pid) {}

  ~SubprocessChannel() override {
    close_fds();  // EOF on stdin asks the child to exit
    for (int i = 0; i < 100; ++i) {
      if (::waitpid(pid_, nullptr, WNOHANG) == pid_) return;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, nullptr, 0);
  }

 private:
  pid_t pid_;
};

}  // namespace

std::unique_ptr<LineChannel> spawn_subprocess(const std::string& command) {
  ignore_sigpipe();
  int to_child[2], from_child[2];
  if (::pipe2(to_child, O_CLOEXEC) != 0) throw IoError("pipe: " + errno_text());
  if (::pipe2(from_child, O_CLOEXEC) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw IoError("pipe: " + errno_text());
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, to_child[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, from_child[1], STDOUT_FILENO);

  std::string sh = "/bin/sh", flag = "-c", cmd = command;
  char* argv[] = {sh.data(), flag.data(), cmd.data(), nullptr};
  pid_t pid = 0;
  const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, nullptr, argv, environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(to_child[0]);
  ::close(from_child[1]);
  if (rc != 0) {
    ::close(to_child[1]);
    ::close(from_child[0]);
    throw IoError("cannot spawn scorer '" + command + "': " + std::strerror(rc));
  }
  return std::make_unique<SubprocessChannel>(from_child[0], to_child[1], pid);
}

std::unique_ptr<LineChannel> connect_tcp(const std::string& host, int port) {
  ignore_sigpipe();
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port_text = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), port_text.c_str(), &hints, &res); rc != 0) {
    throw IoError("cannot resolve scorer host '" + host + "': " + ::gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw IoError("cannot connect to scorer at " + host + ":" + port_text);
  return std::make_unique<FdLineChannel>(fd, fd);
}

std::unique_ptr<LineChannel> open_scorer_channel(const std::string& target) {
  static const std::regex address(R"(^(?:tcp://)?([A-Za-z0-9_.\-]+|\[[0-9A-Fa-f:]+\]):([0-9]{1,5})$)");
  std::smatch m;
  if (std::regex_match(target, m, address)) {
    std::string host = m[1].str();
    if (host.front() == '[') host = host.substr(1, host.size() - 2);
    return connect_tcp(host, std::stoi(m[2].str()));
  }
  return spawn_subprocess(target);
}

std::string format_request(std::uint64_t id, std::string_view png_b64) {
  std::string out = "{\"id\": " + std::to_string(id) + ", \"png_b64\": \"";
  out.append(png_b64);
  out += "\"}";
  return out;
}

ScorerResponse parse_response(std::string_view line) {
  nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ProtocolError("scorer response is not a JSON object: " + std::string(line.substr(0, 200)));
  }
  const auto id = doc.find("id");
  if (id == doc.end() || !id->is_number_unsigned()) {
    throw ProtocolError("scorer response lacks an unsigned integer id");
  }
  ScorerResponse out;
  out.id = id->get<std::uint64_t>();
  const auto score = doc.find("score");
  const auto error = doc.find("error");
  if ((score == doc.end()) == (error == doc.end())) {
    throw ProtocolError("scorer response " + std::to_string(out.id) +
                        " must carry exactly one of score/error");
  }
  if (score != doc.end()) {
    if (!score->is_number()) throw ProtocolError("scorer response score is not a number");
    out.score = score->get<double>();
  } else {
    if (!error->is_string()) throw ProtocolError("scorer response error is not a string");
    out.error = error->get<std::string>();
  }
  return out;
}

ScorerClient::ScorerClient(std::unique_ptr<LineChannel> channel, std::chrono::milliseconds timeout)
    : channel_(std::move(channel)), timeout_(timeout) {
  if (!channel_) throw InvalidArgument("scorer client needs a channel");
}

std::uint64_t ScorerClient::submit(const ImageBuffer& crop) {
  const std::uint64_t id = next_id_++;
  channel_->write_line(format_request(id, base64_encode(encode_png(crop, PngChannels::kRgb))));
  return id;
}

double ScorerClient::await(std::uint64_t id) {
  const auto deadline = Clock::now() + timeout_;
  while (!pending_.contains(id)) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (left.count() <= 0) throw Timeout("scorer did not answer request " + std::to_string(id));
    ScorerResponse r = parse_response(channel_->read_line(left));
    pending_.insert_or_assign(r.id, std::move(r));
  }
  const ScorerResponse r = std::move(pending_.at(id));
  pending_.erase(id);
  if (r.error) throw ProtocolError("scorer rejected request " + std::to_string(id) + ": " + *r.error);
  const double v = *r.score;
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ProtocolError("scorer returned " + std::to_string(v) + " for request " +
                        std::to_string(id) + ", outside [0,1]");
  }
  return v;
}

}  // namespace hocforge
