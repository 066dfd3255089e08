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
#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hocforge/bayesopt.hpp"

namespace hocforge {

enum class PlacementMode { kGuided, kRandom };

struct ScorerSpec {
  enum class Kind { kHeuristic, kExternal };
  Kind kind = Kind::kHeuristic;
  std::string target;  ///< shell command, or host:port / tcp://host:port
  std::chrono::milliseconds timeout{10000};
};

struct IlluminationConfig {
  bool enabled = false;
  std::optional<double> sigma;  ///< nullopt: max(width, height) / 8
  std::vector<std::filesystem::path> reference_pool;
};

struct SynthesisConfig {
  int canvas_width = 0;
  int canvas_height = 0;
  std::filesystem::path library_dir;
  int n_min = 10;
  int n_max = 30;
  double gamma_min = 0.8;
  double gamma_max = 1.2;
  double theta_min = 0.0;
  double theta_max = 360.0;
  BOConfig bo;
  ScorerSpec scorer;
  PlacementMode placement = PlacementMode::kGuided;
  IlluminationConfig illumination;
  double occlusion_export_max = 0.8;
  std::uint64_t seed = 0;
  int count = 1;
  std::string category = "object";

  /// Throws ConfigError naming the field and the violated constraint.
  void validate() const;
};

/// Strict parse: unknown keys are rejected, missing optional keys take the
/// defaults above. Relative paths resolve against `base_dir`.
SynthesisConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Throws IoError when the file cannot be read, ConfigError when invalid.
SynthesisConfig load_config(const std::filesystem::path& path);

/// Replaces the seed with HOCFORGE_SEED when that variable is set. Throws
/// ConfigError if it is not an unsigned integer.
void apply_seed_override(SynthesisConfig& config);

}  // namespace hocforge
