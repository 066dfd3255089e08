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

#include <memory>

#include "hocforge/image.hpp"

namespace hocforge {

class ScorerClient;

struct ScoreMetadata {
  int k = 1;                   ///< 1-based ordinal of the object being placed
  double occlusion_new = 0.0;  ///< occlusion fraction of the candidate object
  double contact_ratio = 0.0;  ///< share of its mask touching prior objects
};

/// Input of the placement likelihood: the tight-bbox crop of the candidate
/// scene plus geometry the built-in scorer needs. Only the crop goes over the
/// wire to external scorers.
struct ScoreRequest {
  ImageBuffer crop;
  ScoreMetadata metadata;

  /// Throws InvalidArgument when a metadata field is out of range.
  void validate() const;
};

struct Score {
  double value;
};

/// Placement likelihood f. Implementations return a value in [0, 1] or throw;
/// they never clamp silently.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual Score score(const ScoreRequest& request) = 0;
};

/// Constants of the built-in heuristic. Defaults are tuned for reproducible
/// tests; the cutoff matches the dataset's 80% occlusion rule.
struct HeuristicParams {
  double occlusion_falloff = 0.3;
  double occlusion_cutoff = 0.8;
  double contact_saturation = 0.05;
  int contact_radius = 3;
};

/// s_occ * s_contact, with s_occ = exp(-(occ / falloff)^2) below the cutoff
/// (0 at or above it) and s_contact = min(1, contact / saturation) for k > 1
/// (1 for the first object).
Score heuristic_score(const ScoreRequest& request, const HeuristicParams& params = {});

class HeuristicScorer final : public Scorer {
 public:
  explicit HeuristicScorer(HeuristicParams params = {}) : params_(params) {}
  Score score(const ScoreRequest& request) override { return heuristic_score(request, params_); }
  const HeuristicParams& params() const { return params_; }

 private:
  HeuristicParams params_;
};

/// Sends the crop to a remote scorer and returns its score. Throws
/// ProtocolError on malformed or out-of-range replies, Timeout when silent.
Score external_score(const ScoreRequest& request, ScorerClient& client);

class ExternalScorer final : public Scorer {
 public:
  explicit ExternalScorer(std::unique_ptr<ScorerClient> client);
  ~ExternalScorer() override;
  Score score(const ScoreRequest& request) override;

 private:
  std::unique_ptr<ScorerClient> client_;
};

/// |dilated_prior ∩ full_new| / |full_new|, where `dilated_prior` is the prior
/// occupancy already dilated by the contact radius. 0 for an empty mask.
double contact_ratio(const Bitmap& dilated_prior, const Bitmap& full_new);

}  // namespace hocforge
