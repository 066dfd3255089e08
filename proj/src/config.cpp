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

#include "hocforge/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "hocforge/error.hpp"

namespace hocforge {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError((where.empty() ? key : where + "." + key) + ": unknown key");
    }
  }
}

template <typename T>
T get(const json& value, const std::string& name) {
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!value.is_number()) throw ConfigError(name + ": expected a number");
    } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!value.is_number_integer()) throw ConfigError(name + ": expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (!value.is_number_unsigned()) throw ConfigError(name + ": expected a non-negative integer");
      }
    }
    return value.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(name + ": " + e.what());
  }
}

template <typename T>
std::pair<T, T> get_pair(const json& value, const std::string& name) {
  if (!value.is_array() || value.size() != 2) throw ConfigError(name + ": expected a 2-element array");
  return {get<T>(value[0], name + "[0]"), get<T>(value[1], name + "[1]")};
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

ScorerSpec parse_scorer(const json& v) {
  ScorerSpec s;
  if (v.is_string()) {
    if (v.get<std::string>() != "heuristic") {
      throw ConfigError("scorer: expected \"heuristic\" or an object with command/address");
    }
    return s;
  }
  if (!v.is_object()) throw ConfigError("scorer: expected a string or an object");
  reject_unknown(v, "scorer", {"command", "address", "timeout_ms"});
  const bool has_cmd = v.contains("command"), has_addr = v.contains("address");
  if (has_cmd == has_addr) throw ConfigError("scorer: exactly one of command/address is required");
  s.kind = ScorerSpec::Kind::kExternal;
  s.target = get<std::string>(has_cmd ? v["command"] : v["address"],
                              has_cmd ? "scorer.command" : "scorer.address");
  if (s.target.empty()) throw ConfigError("scorer: target must be non-empty");
  if (v.contains("timeout_ms")) {
    const auto ms = get<std::int64_t>(v["timeout_ms"], "scorer.timeout_ms");
    if (ms <= 0) throw ConfigError("scorer.timeout_ms: must be > 0");
    s.timeout = std::chrono::milliseconds(ms);
  }
  return s;
}

}  // namespace

void SynthesisConfig::validate() const {
  if (canvas_width < 1 || canvas_height < 1) throw ConfigError("canvas: width and height must be >= 1");
  if (library_dir.empty()) throw ConfigError("library_dir: required");
  if (n_min < 1) throw ConfigError("n_range: n_min must be >= 1");
  if (n_min > n_max) throw ConfigError("n_range: n_min must be <= n_max");
  if (!(std::isfinite(gamma_min) && std::isfinite(gamma_max) && gamma_min > 0.0)) {
    throw ConfigError("gamma_range: gamma_min must be > 0");
  }
  if (gamma_min > gamma_max) throw ConfigError("gamma_range: gamma_min must be <= gamma_max");
  if (!(theta_min >= 0.0 && theta_min <= theta_max && theta_max <= 360.0)) {
    throw ConfigError("theta_range: need 0 <= theta_min <= theta_max <= 360");
  }
  try {
    bo.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("bo: ") + e.what());
  }
  if (illumination.sigma && !(*illumination.sigma > 0.0 && std::isfinite(*illumination.sigma))) {
    throw ConfigError("illumination.sigma: must be > 0");
  }
  if (!(occlusion_export_max > 0.0 && occlusion_export_max <= 1.0)) {
    throw ConfigError("occlusion_export_max: must lie in (0, 1]");
  }
  if (count < 0) throw ConfigError("count: must be >= 0");
  if (category.empty()) throw ConfigError("category: must be non-empty");
}

SynthesisConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  reject_unknown(doc, "",
                 {"canvas", "library_dir", "n_range", "gamma_range", "theta_range", "bo", "scorer",
                  "placement", "illumination", "occlusion_export_max", "seed", "count", "category"});
  SynthesisConfig c;
  if (!doc.contains("canvas")) throw ConfigError("canvas: required");
  std::tie(c.canvas_width, c.canvas_height) = get_pair<int>(doc["canvas"], "canvas");
  if (!doc.contains("library_dir")) throw ConfigError("library_dir: required");
  c.library_dir = resolve(base_dir, get<std::string>(doc["library_dir"], "library_dir"));
  if (doc.contains("n_range")) std::tie(c.n_min, c.n_max) = get_pair<int>(doc["n_range"], "n_range");
  if (doc.contains("gamma_range")) {
    std::tie(c.gamma_min, c.gamma_max) = get_pair<double>(doc["gamma_range"], "gamma_range");
  }
  if (doc.contains("theta_range")) {
    std::tie(c.theta_min, c.theta_max) = get_pair<double>(doc["theta_range"], "theta_range");
  }
  if (doc.contains("bo")) {
    const json& bo = doc["bo"];
    if (!bo.is_object()) throw ConfigError("bo: expected an object");
    reject_unknown(bo, "bo",
                   {"budget", "n_init", "xi", "n_restarts", "sweeps", "length_scale",
                    "signal_variance", "jitter"});
    if (bo.contains("budget")) c.bo.budget = get<int>(bo["budget"], "bo.budget");
    if (bo.contains("n_init")) c.bo.n_init = get<int>(bo["n_init"], "bo.n_init");
    if (bo.contains("xi")) c.bo.xi = get<double>(bo["xi"], "bo.xi");
    if (bo.contains("n_restarts")) c.bo.n_restarts = get<int>(bo["n_restarts"], "bo.n_restarts");
    if (bo.contains("sweeps")) c.bo.sweeps = get<int>(bo["sweeps"], "bo.sweeps");
    if (bo.contains("length_scale")) {
      const json& ls = bo["length_scale"];
      if (ls.is_array()) {
        if (ls.size() != kPlacementDims) throw ConfigError("bo.length_scale: expected 4 values");
        for (std::size_t d = 0; d < kPlacementDims; ++d) {
          c.bo.kernel.length_scales[d] = get<double>(ls[d], "bo.length_scale");
        }
      } else {
        c.bo.kernel.length_scales.fill(get<double>(ls, "bo.length_scale"));
      }
    }
    if (bo.contains("signal_variance")) {
      c.bo.kernel.signal_variance = get<double>(bo["signal_variance"], "bo.signal_variance");
    }
    if (bo.contains("jitter")) c.bo.kernel.jitter = get<double>(bo["jitter"], "bo.jitter");
  }
  if (doc.contains("scorer")) c.scorer = parse_scorer(doc["scorer"]);
  if (doc.contains("placement")) {
    const auto mode = get<std::string>(doc["placement"], "placement");
    if (mode == "guided") c.placement = PlacementMode::kGuided;
    else if (mode == "random") c.placement = PlacementMode::kRandom;
    else throw ConfigError("placement: expected \"guided\" or \"random\"");
  }
  if (doc.contains("illumination")) {
    const json& il = doc["illumination"];
    if (!il.is_object()) throw ConfigError("illumination: expected an object");
    reject_unknown(il, "illumination", {"enabled", "sigma", "reference_pool"});
    if (il.contains("enabled")) {
      if (!il["enabled"].is_boolean()) throw ConfigError("illumination.enabled: expected a boolean");
      c.illumination.enabled = il["enabled"].get<bool>();
    }
    if (il.contains("sigma")) {
      const json& s = il["sigma"];
      if (s.is_string()) {
        if (s.get<std::string>() != "max/8") throw ConfigError("illumination.sigma: expected \"max/8\" or a number");
      } else {
        c.illumination.sigma = get<double>(s, "illumination.sigma");
      }
    }
    if (il.contains("reference_pool")) {
      const json& pool = il["reference_pool"];
      if (!pool.is_array()) throw ConfigError("illumination.reference_pool: expected an array");
      for (const auto& p : pool) {
        c.illumination.reference_pool.push_back(
            resolve(base_dir, get<std::string>(p, "illumination.reference_pool")));
      }
    }
  }
  if (doc.contains("occlusion_export_max")) {
    c.occlusion_export_max = get<double>(doc["occlusion_export_max"], "occlusion_export_max");
  }
  if (doc.contains("seed")) c.seed = get<std::uint64_t>(doc["seed"], "seed");
  if (doc.contains("count")) c.count = get<int>(doc["count"], "count");
  if (doc.contains("category")) c.category = get<std::string>(doc["category"], "category");
  c.validate();
  return c;
}

SynthesisConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const json doc = json::parse(ss.str(), nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config: " + path.string() + " is not valid JSON");
  return parse_config(doc, path.parent_path());
}

void apply_seed_override(SynthesisConfig& config) {
  const char* env = std::getenv("HOCFORGE_SEED");
  if (env == nullptr) return;
  const std::string text(env);
  std::uint64_t seed = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    throw ConfigError("HOCFORGE_SEED: expected an unsigned integer, got '" + text + "'");
  }
  config.seed = seed;
}

}  // namespace hocforge
