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

#include "hocforge/scorer.hpp"

#include <algorithm>
#include <cmath>

#include "hocforge/error.hpp"
#include "hocforge/scorer_client.hpp"

namespace hocforge {

void ScoreRequest::validate() const {
  const auto& m = metadata;
  if (m.k < 1) throw InvalidArgument("score request ordinal k must be >= 1");
  if (!(m.occlusion_new >= 0.0 && m.occlusion_new <= 1.0)) {
    throw InvalidArgument("score request occlusion_new outside [0,1]");
  }
  if (!(m.contact_ratio >= 0.0 && m.contact_ratio <= 1.0)) {
    throw InvalidArgument("score request contact_ratio outside [0,1]");
  }
}

Score heuristic_score(const ScoreRequest& request, const HeuristicParams& params) {
  request.validate();
  const double occ = request.metadata.occlusion_new;
  const double s_occ = occ < params.occlusion_cutoff
                           ? std::exp(-(occ / params.occlusion_falloff) * (occ / params.occlusion_falloff))
                           : 0.0;
  const double s_contact =
      request.metadata.k > 1
          ? std::min(1.0, request.metadata.contact_ratio / params.contact_saturation)
          : 1.0;
  return {s_occ * s_contact};
}

Score external_score(const ScoreRequest& request, ScorerClient& client) {
  return {client.score(request.crop)};
}

ExternalScorer::ExternalScorer(std::unique_ptr<ScorerClient> client) : client_(std::move(client)) {
  if (!client_) throw InvalidArgument("external scorer needs a client");
}

ExternalScorer::~ExternalScorer() = default;

Score ExternalScorer::score(const ScoreRequest& request) {
  return external_score(request, *client_);
}

double contact_ratio(const Bitmap& dilated_prior, const Bitmap& full_new) {
  if (dilated_prior.width() != full_new.width() || dilated_prior.height() != full_new.height()) {
    throw ShapeMismatch("contact_ratio masks differ in size");
  }
  std::size_t total = 0, touching = 0;
  auto a = dilated_prior.bits();
  auto b = full_new.bits();
  for (std::size_t i = 0; i < b.size(); ++i) {
    total += b[i];
    touching += b[i] & a[i];
  }
  return total == 0 ? 0.0 : static_cast<double>(touching) / static_cast<double>(total);
}

}  // namespace hocforge
