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

#include "hocforge/bayesopt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hocforge/error.hpp"

namespace hocforge {

void Bounds::validate() const {
  for (std::size_t d = 0; d < kPlacementDims; ++d) {
    const auto [lo, hi] = dims[d];
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
      std::ostringstream msg;
      msg << "bounds dimension " << d << " invalid: [" << lo << ", " << hi << "]";
      throw InvalidArgument(msg.str());
    }
  }
}

Point Bounds::normalize(const Point& native) const {
  Point u{};
  for (std::size_t d = 0; d < kPlacementDims; ++d) {
    const auto [lo, hi] = dims[d];
    u[d] = hi > lo ? (native[d] - lo) / (hi - lo) : 0.0;
  }
  return u;
}

Point Bounds::denormalize(const Point& unit) const {
  Point p{};
  for (std::size_t d = 0; d < kPlacementDims; ++d) {
    const auto [lo, hi] = dims[d];
    p[d] = lo + unit[d] * (hi - lo);
  }
  return p;
}

void BOConfig::validate() const {
  if (budget < 1) throw InvalidArgument("BO budget M must be >= 1");
  if (n_init < 1) throw InvalidArgument("BO n_init must be >= 1");
  if (n_restarts < 1) throw InvalidArgument("BO n_restarts must be >= 1");
  if (sweeps < 0) throw InvalidArgument("BO sweeps must be >= 0");
  if (!(xi >= 0.0)) throw InvalidArgument("EI xi must be >= 0");
  for (const double l : kernel.length_scales) {
    if (!(l > 0.0 && std::isfinite(l))) throw InvalidArgument("kernel length scales must be > 0");
  }
  if (!(kernel.signal_variance > 0.0 && std::isfinite(kernel.signal_variance))) {
    throw InvalidArgument("kernel signal variance must be > 0");
  }
  if (!(kernel.jitter >= 0.0 && std::isfinite(kernel.jitter))) {
    throw InvalidArgument("kernel jitter must be >= 0");
  }
}

double expected_improvement(double mu, double var, double best, double xi) {
  const double improvement = mu - best - xi;
  const double sigma = std::sqrt(std::max(var, 0.0));
  if (sigma <= 0.0) return std::max(0.0, improvement);
  const double z = improvement / sigma;
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  return std::max(0.0, improvement * cdf + sigma * pdf);
}

namespace {

constexpr int kGoldenIterations = 20;

// Golden-section search for the maximum of `f` on [0, 1].
template <typename F>
std::pair<double, double> golden_section_max(F&& f) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 1.0;
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < kGoldenIterations; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

Point random_unit_point(Rng& rng) {
  Point p{};
  for (double& v : p) v = uniform01(rng);
  return p;
}

double evaluate_checked(const Objective& objective, const Point& native) {
  const double y = objective(native);
  if (!std::isfinite(y)) {
    std::ostringstream msg;
    msg << "objective returned " << y << " at (" << native[0] << ", " << native[1] << ", "
        << native[2] << ", " << native[3] << ")";
    throw ObjectiveError(msg.str(), native);
  }
  return y;
}

BoResult finish(ObservationSet trace, const Bounds& bounds) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace.values[i] > trace.values[best]) best = i;
  }
  return {bounds.denormalize(trace.points[best]), trace.values[best], best, std::move(trace)};
}

}  // namespace

Point maximize_acquisition(const GPPosterior& posterior, const BOConfig& config, Rng& rng) {
  const auto& values = posterior.observations().values;
  const double best = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  auto acquisition = [&](const Point& p) {
    const Prediction pr = gp_predict(posterior, p);
    return expected_improvement(pr.mean, pr.variance, best, config.xi);
  };

  Point winner{};
  double winner_value = -1.0;
  for (int restart = 0; restart < config.n_restarts; ++restart) {
    Point x = random_unit_point(rng);
    double fx = acquisition(x);
    for (int sweep = 0; sweep < config.sweeps; ++sweep) {
      for (std::size_t d = 0; d < kPlacementDims; ++d) {
        Point probe = x;
        const auto [t, ft] = golden_section_max([&](double v) {
          probe[d] = v;
          return acquisition(probe);
        });
        if (ft > fx) {
          x[d] = t;
          fx = ft;
        }
      }
    }
    if (fx > winner_value) {
      winner = x;
      winner_value = fx;
    }
  }
  return winner;
}

BoResult bayes_opt(const Objective& objective, const Bounds& bounds, const BOConfig& config,
                   Rng& rng) {
  bounds.validate();
  config.validate();
  ObservationSet trace;
  for (int i = 0; i < config.n_init; ++i) {
    const Point u = random_unit_point(rng);
    trace.add(u, evaluate_checked(objective, bounds.denormalize(u)));
  }
  for (int m = 0; m < config.budget; ++m) {
    const GPPosterior posterior = gp_fit(trace, config.kernel);
    const Point u = maximize_acquisition(posterior, config, rng);
    trace.add(u, evaluate_checked(objective, bounds.denormalize(u)));
  }
  return finish(std::move(trace), bounds);
}

BoResult random_search(const Objective& objective, const Bounds& bounds, int evaluations,
                       Rng& rng) {
  bounds.validate();
  if (evaluations < 1) throw InvalidArgument("random search needs at least one evaluation");
  ObservationSet trace;
  for (int i = 0; i < evaluations; ++i) {
    const Point u = random_unit_point(rng);
    trace.add(u, evaluate_checked(objective, bounds.denormalize(u)));
  }
  return finish(std::move(trace), bounds);
}

}  // namespace hocforge
