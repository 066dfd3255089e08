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
// Stand-in scorer process speaking the line protocol on stdin/stdout.
//
//   fake_scorer <mode> [value]
//   modes: mean (score = mean V of the decoded crop), fixed <v>, silent,
//          reorder (answers pairs in swapped order), badjson, range, error,
//          exit (quits after reading the first request)

#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "hocforge/png_io.hpp"

using nlohmann::json;

namespace {

double mean_value(const std::string& b64) {
  const auto bytes = hocforge::base64_decode(b64);
  if (!bytes) throw std::runtime_error("bad base64");
  const hocforge::ImageBuffer img = hocforge::decode_png(*bytes);
  double s = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const auto p = img.at(x, y);
      s += std::max({p.r, p.g, p.b});
    }
  }
  return s / static_cast<double>(img.pixel_count());
}

void reply(const json& j) {
  std::cout << j.dump() << "\n" << std::flush;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "mean";
  const double fixed = argc > 2 ? std::stod(argv[2]) : 0.5;
  std::string line;
  std::vector<json> held;
  while (std::getline(std::cin, line)) {
    const json req = json::parse(line, nullptr, false);
    if (req.is_discarded() || !req.contains("id")) {
      reply({{"id", 0}, {"error", "malformed request"}});
      continue;
    }
    const auto id = req["id"].get<std::uint64_t>();
    if (mode == "silent") continue;
    if (mode == "exit") return 0;
    if (mode == "badjson") {
      std::cout << "{not json\n" << std::flush;
      continue;
    }
    if (mode == "range") {
      reply({{"id", id}, {"score", 1.5}});
      continue;
    }
    if (mode == "error") {
      reply({{"id", id}, {"error", "model unavailable"}});
      continue;
    }
    json out;
    try {
      const double s = mode == "fixed" ? fixed : mean_value(req.at("png_b64").get<std::string>());
      out = {{"id", id}, {"score", s}};
    } catch (const std::exception& e) {
      out = {{"id", id}, {"error", e.what()}};
    }
    if (mode == "reorder") {
      held.push_back(out);
      if (held.size() == 2) {
        reply(held[1]);
        reply(held[0]);
        held.clear();
      }
      continue;
    }
    reply(out);
  }
  for (const auto& h : held) reply(h);
  return 0;
}
