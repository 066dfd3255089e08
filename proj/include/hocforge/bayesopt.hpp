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

#include <array>
#include <cstddef>
#include <functional>
#include <utility>

#include "hocforge/gp.hpp"
#include "hocforge/random.hpp"

namespace hocforge {

/// Per-dimension (lo, hi) in native units. A dimension with lo == hi is held
/// fixed at lo.
struct Bounds {
  std::array<std::pair<double, double>, kPlacementDims> dims;

  /// Throws InvalidArgument unless lo <= hi (and both finite) everywhere.
  void validate() const;
  Point normalize(const Point& native) const;
  Point denormalize(const Point& unit) const;
};

struct BOConfig {
  int budget = 30;      ///< M: acquisition-driven evaluations
  int n_init = 10;      ///< uniform evaluations before the first fit
  double xi = 0.01;     ///< EI exploration offset
  int n_restarts = 16;  ///< acquisition multistarts
  int sweeps = 2;       ///< coordinate-wise golden-section passes per start
  KernelParams kernel;

  void validate() const;
};

/// (mu - best - xi) * Phi(z) + sigma * phi(z) with z = (mu - best - xi) / sigma;
/// max(0, mu - best - xi) when sigma = 0.
double expected_improvement(double mu, double var, double best, double xi);

/// Multistart coordinate-wise golden-section maximization of EI over the unit
/// box. The incumbent is the best observed value (0 with no observations);
/// the first start attaining the maximum wins.
Point maximize_acquisition(const GPPosterior& posterior, const BOConfig& config, Rng& rng);

struct BoResult {
  Point best_point;  ///< native units
  double best_value;
  std::size_t best_index;  ///< position of the argmax in `trace`
  ObservationSet trace;    ///< every evaluation, normalized, in order
};

using Objective = std::function<double(const Point&)>;

/// Evaluates `objective` exactly n_init + budget times and returns the first
/// maximum. The objective receives native-unit points. Throws ObjectiveError
/// on a non-finite objective value.
BoResult bayes_opt(const Objective& objective, const Bounds& bounds, const BOConfig& config,
                   Rng& rng);

/// Uniform random search with `evaluations` samples; the baseline BO is
/// compared against.
BoResult random_search(const Objective& objective, const Bounds& bounds, int evaluations, Rng& rng);

}  // namespace hocforge
