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
#include <vector>

namespace hocforge {

inline constexpr std::size_t kPlacementDims = 4;

/// Point of the placement search space: (theta, gamma, x, y). Normalized to
/// the unit box inside the optimizer, native units outside it.
using Point = std::array<double, kPlacementDims>;

/// Squared-exponential kernel hyperparameters on normalized inputs.
struct KernelParams {
  Point length_scales{0.8, 0.8, 0.8, 0.8};
  double signal_variance = 1.0;
  double jitter = 1e-8;
};

/// Sampled (point, value) pairs. Points are normalized to [0,1]^4.
struct ObservationSet {
  std::vector<Point> points;
  std::vector<double> values;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  void add(const Point& p, double v) {
    points.push_back(p);
    values.push_back(v);
  }

  friend bool operator==(const ObservationSet&, const ObservationSet&) = default;
};

/// sigma^2 * exp(-1/2 * sum_d ((a_d - b_d) / l_d)^2)
double kernel(const Point& a, const Point& b, const KernelParams& params);

/// Gaussian-process posterior conditioned on an observation set.
///
/// The prior mean is the constant m = mean(y) (0 with no observations).
/// Holds the lower Cholesky factor L of K + jitter*I (row-major, n x n) and
/// alpha = (K + jitter*I)^-1 (y - m). `jitter()` is the value actually used
/// after any escalation.
class GPPosterior {
 public:
  const ObservationSet& observations() const { return obs_; }
  const KernelParams& params() const { return params_; }
  double jitter() const { return jitter_; }
  std::size_t size() const { return obs_.size(); }
  const std::vector<double>& factor() const { return factor_; }
  const std::vector<double>& weights() const { return alpha_; }
  double mean_offset() const { return mean_offset_; }

 private:
  friend GPPosterior gp_fit(ObservationSet obs, const KernelParams& params);

  ObservationSet obs_;
  KernelParams params_;
  double jitter_ = 0.0;
  double mean_offset_ = 0.0;
  std::vector<double> factor_;
  std::vector<double> alpha_;
};

/// Factorizes K + jitter*I, multiplying the jitter by 10 on failure up to
/// 1e-2. Throws NumericalFailure past that.
GPPosterior gp_fit(ObservationSet obs, const KernelParams& params);

struct Prediction {
  double mean;
  double variance;
};

/// mu = m + k(x,X)^T alpha, var = k(x,x) - k^T (K + jitter*I)^-1 k floored at
/// 0. With no observations this is the prior (0, signal_variance).
Prediction gp_predict(const GPPosterior& posterior, const Point& x);

/// In-place lower Cholesky of a symmetric n x n row-major matrix. Returns
/// false when a pivot is not strictly positive.
bool cholesky_lower(std::vector<double>& a, std::size_t n);

}  // namespace hocforge
