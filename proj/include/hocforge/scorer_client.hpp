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

// Scorer wire protocol: newline-delimited JSON, one object per line.
//
//   request   {"id": <uint64>, "png_b64": "<base64 PNG of crop>"}
//   response  {"id": <same uint64>, "score": <float in [0,1]>}
//   error     {"id": <uint64>, "error": "<message>"}
//
// Responses may arrive out of order; ids pair them with requests.

#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "hocforge/image.hpp"

namespace hocforge {

/// Bidirectional line transport.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  /// Writes `line` followed by '\n'. Throws ProtocolError if the peer is gone.
  virtual void write_line(std::string_view line) = 0;
  /// Next line without its terminator. Throws Timeout when nothing arrives
  /// in time and ProtocolError on end of stream.
  virtual std::string read_line(std::chrono::milliseconds timeout) = 0;
};

/// Runs `command` through /bin/sh and talks to its stdin/stdout.
std::unique_ptr<LineChannel> spawn_subprocess(const std::string& command);

std::unique_ptr<LineChannel> connect_tcp(const std::string& host, int port);

/// "tcp://host:port" or "host:port" selects TCP; anything else is a command.
std::unique_ptr<LineChannel> open_scorer_channel(const std::string& target);

struct ScorerResponse {
  std::uint64_t id = 0;
  std::optional<double> score;
  std::optional<std::string> error;
};

std::string format_request(std::uint64_t id, std::string_view png_b64);

/// Throws ProtocolError unless `line` is an object with an unsigned "id" and
/// exactly one of a numeric "score" or a string "error".
ScorerResponse parse_response(std::string_view line);

/// Client side of the protocol over one channel. Not thread-safe; one per
/// worker.
class ScorerClient {
 public:
  static constexpr std::chrono::milliseconds kDefaultTimeout{10'000};

  explicit ScorerClient(std::unique_ptr<LineChannel> channel,
                        std::chrono::milliseconds timeout = kDefaultTimeout);

  /// Encodes the crop as an 8-bit RGB PNG and sends it; returns the id.
  std::uint64_t submit(const ImageBuffer& crop);

  /// Blocks until the response for `id` arrives, buffering others. Returns a
  /// score in [0,1]; throws ProtocolError or Timeout.
  double await(std::uint64_t id);

  double score(const ImageBuffer& crop) { return await(submit(crop)); }

  std::chrono::milliseconds timeout() const { return timeout_; }

 private:
  std::unique_ptr<LineChannel> channel_;
  std::chrono::milliseconds timeout_;
  std::uint64_t next_id_ = 1;
  std::map<std::uint64_t, ScorerResponse> pending_;
};

}  // namespace hocforge
