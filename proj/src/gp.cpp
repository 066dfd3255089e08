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

#include "hocforge/gp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hocforge/error.hpp"

namespace hocforge {

double kernel(const Point& a, const Point& b, const KernelParams& params) {
  double q = 0.0;
  for (std::size_t d = 0; d < kPlacementDims; ++d) {
    const double t = (a[d] - b[d]) / params.length_scales[d];
    q += t * t;
  }
  return params.signal_variance * std::exp(-0.5 * q);
}

bool cholesky_lower(std::vector<double>& a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
    if (!(diag > 0.0)) return false;
    const double ljj = std::sqrt(diag);
    a[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / ljj;
    }
    for (std::size_t k = j + 1; k < n; ++k) a[j * n + k] = 0.0;
  }
  return true;
}

namespace {

// Solves L z = b in place.
void forward_substitute(const std::vector<double>& l, std::size_t n, std::vector<double>& b) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * b[k];
    b[i] = s / l[i * n + i];
  }
}

// Solves L^T z = b in place.
void backward_substitute(const std::vector<double>& l, std::size_t n, std::vector<double>& b) {
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l[k * n + ii] * b[k];
    b[ii] = s / l[ii * n + ii];
  }
}

void validate_params(const KernelParams& params) {
  for (double l : params.length_scales) {
    if (!(l > 0.0)) throw InvalidArgument("kernel length scales must be positive");
  }
  if (!(params.signal_variance > 0.0)) throw InvalidArgument("signal variance must be positive");
  if (!(params.jitter >= 0.0)) throw InvalidArgument("jitter must be non-negative");
}

}  // namespace

GPPosterior gp_fit(ObservationSet obs, const KernelParams& params) {
  validate_params(params);
  if (obs.points.size() != obs.values.size()) {
    throw InvalidArgument("observation points and values differ in length");
  }
  const std::size_t n = obs.size();
  std::vector<double> gram(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double k = kernel(obs.points[i], obs.points[j], params);
      gram[i * n + j] = k;
      gram[j * n + i] = k;
    }
  }

  constexpr double kMaxJitter = 1e-2;
  double jitter = params.jitter;
  std::vector<double> factor;
  while (true) {
    factor = gram;
    for (std::size_t i = 0; i < n; ++i) factor[i * n + i] += jitter;
    if (cholesky_lower(factor, n)) break;
    jitter = jitter > 0.0 ? jitter * 10.0 : 1e-12;
    if (jitter > kMaxJitter) {
      std::ostringstream msg;
      msg << "Cholesky factorization of " << n << "x" << n
          << " kernel matrix failed with jitter up to " << kMaxJitter;
      throw NumericalFailure(msg.str());
    }
  }

  const double offset =
      n == 0 ? 0.0 : std::accumulate(obs.values.begin(), obs.values.end(), 0.0) / n;
  std::vector<double> alpha = obs.values;
  for (double& v : alpha) v -= offset;
  forward_substitute(factor, n, alpha);
  backward_substitute(factor, n, alpha);

  GPPosterior post;
  post.obs_ = std::move(obs);
  post.params_ = params;
  post.jitter_ = jitter;
  post.factor_ = std::move(factor);
  post.alpha_ = std::move(alpha);
  post.mean_offset_ = offset;
  return post;
}

Prediction gp_predict(const GPPosterior& posterior, const Point& x) {
  const std::size_t n = posterior.size();
  const KernelParams& params = posterior.params();
  if (n == 0) return {0.0, params.signal_variance};

  std::vector<double> k(n);
  double mean = posterior.mean_offset();
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = kernel(x, posterior.observations().points[i], params);
    mean += k[i] * posterior.weights()[i];
  }
  forward_substitute(posterior.factor(), n, k);
  double explained = 0.0;
  for (double v : k) explained += v * v;
  return {mean, std::max(0.0, params.signal_variance - explained)};
}

}  // namespace hocforge
