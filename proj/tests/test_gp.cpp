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
#include <doctest.h>

#include <cmath>
#include <limits>

#include "hocforge/bayesopt.hpp"
#include "hocforge/error.hpp"
#include "hocforge/gp.hpp"
#include "oracles.hpp"

using namespace hocforge;

namespace {

Point random_point(Rng& rng) {
  Point p;
  for (auto& v : p) v = uniform01(rng);
  return p;
}

}  // namespace

TEST_CASE("posterior matches a dense-inverse oracle") {
  Rng rng(2024);
  KernelParams params;
  for (int design = 0; design < 50; ++design) {
    params.length_scales = {uniform(rng, 0.2, 1.0), uniform(rng, 0.2, 1.0), uniform(rng, 0.2, 1.0),
                            uniform(rng, 0.2, 1.0)};
    params.signal_variance = uniform(rng, 0.5, 2.0);
    ObservationSet obs;
    const int n = static_cast<int>(uniform_int(rng, 0, 20));
    for (int i = 0; i < n; ++i) obs.add(random_point(rng), uniform(rng, -1, 1));
    const GPPosterior post = gp_fit(obs, params);
    for (int q = 0; q < 20; ++q) {
      const Point x = random_point(rng);
      const Prediction p = gp_predict(post, x);
      const auto o = oracles::dense_gp(obs.points, obs.values, x, params, post.jitter());
      REQUIRE(std::abs(p.mean - o.mean) <= 1e-8);
      REQUIRE(std::abs(p.variance - o.variance) <= 1e-8);
    }
  }
}

TEST_CASE("cholesky factor reconstructs the jittered Gram matrix") {
  Rng rng(5);
  KernelParams params;
  for (int design = 0; design < 50; ++design) {
    ObservationSet obs;
    const int n = static_cast<int>(uniform_int(rng, 1, 20));
    for (int i = 0; i < n; ++i) obs.add(random_point(rng), uniform01(rng));
    const GPPosterior post = gp_fit(obs, params);
    const auto& L = post.factor();
    double frob = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double llt = 0;
        for (int k = 0; k < n; ++k) llt += L[i * n + k] * L[j * n + k];
        const double kij = kernel(obs.points[i], obs.points[j], params) + (i == j ? post.jitter() : 0.0);
        frob += (llt - kij) * (llt - kij);
        if (j > i) REQUIRE(L[i * n + j] == 0.0);
      }
    }
    REQUIRE(std::sqrt(frob) <= 1e-8);
  }
}

TEST_CASE("duplicate points escalate the jitter instead of failing") {
  KernelParams params;
  params.jitter = 0.0;
  ObservationSet obs;
  const Point p{0.5, 0.5, 0.5, 0.5};
  obs.add(p, 1.0);
  obs.add(p, 1.0);
  const GPPosterior post = gp_fit(obs, params);
  CHECK(post.jitter() > 0.0);
  CHECK(post.jitter() <= 1e-2);
  CHECK(gp_predict(post, p).mean == doctest::Approx(1.0));
}

TEST_CASE("empty posterior returns the prior") {
  KernelParams params;
  params.signal_variance = 1.7;
  const Prediction p = gp_predict(gp_fit({}, params), {0.1, 0.2, 0.3, 0.4});
  CHECK(p.mean == 0.0);
  CHECK(p.variance == 1.7);
}

TEST_CASE("cholesky_lower reports indefinite matrices") {
  std::vector<double> a{1, 2, 2, 1};
  CHECK_FALSE(cholesky_lower(a, 2));
  std::vector<double> b{4, 2, 2, 3};
  REQUIRE(cholesky_lower(b, 2));
  CHECK(b[0] == 2.0);
  CHECK(b[2] == 1.0);
  CHECK(b[3] == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("expected improvement equals the closed form on a grid") {
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double mu = -2.0 + 4.0 * i / 99.0;
      const double var = j == 0 ? 0.0 : std::pow(10.0, -6.0 + 7.0 * j / 99.0);
      worst = std::max(worst, std::abs(expected_improvement(mu, var, 0.3, 0.01) -
                                       oracles::direct_ei(mu, var, 0.3, 0.01)));
    }
  }
  CHECK(worst <= 1e-10);
  CHECK(expected_improvement(1.0, 0.0, 0.5, 0.1) == doctest::Approx(0.4));
  CHECK(expected_improvement(0.2, 0.0, 0.5, 0.1) == 0.0);
  CHECK(expected_improvement(-50.0, 1e-4, 0.0, 0.0) >= 0.0);
}

TEST_CASE("bounds normalize, denormalize and validate") {
  const Bounds b{{{{0, 360}, {0.8, 1.2}, {10, 90}, {5, 5}}}};
  b.validate();
  const Point native{90, 1.0, 30, 5};
  const Point u = b.normalize(native);
  CHECK(u[0] == doctest::Approx(0.25));
  CHECK(u[3] == 0.0);
  const Point back = b.denormalize(u);
  for (int d = 0; d < 4; ++d) CHECK(back[d] == doctest::Approx(native[d]));
  CHECK(b.denormalize({0.3, 0.3, 0.3, 0.9})[3] == 5.0);
  CHECK_THROWS_AS((Bounds{{{{1, 0}, {0, 1}, {0, 1}, {0, 1}}}}.validate()), InvalidArgument);
  CHECK_THROWS_AS((Bounds{{{{0, std::numeric_limits<double>::infinity()}, {0, 1}, {0, 1}, {0, 1}}}}.validate()),
                  InvalidArgument);
}

TEST_CASE("bayes_opt evaluates exactly n_init + budget points and returns the first argmax") {
  const Bounds b{{{{0, 1}, {0, 1}, {0, 1}, {0, 1}}}};
  BOConfig cfg;
  cfg.budget = 7;
  cfg.n_init = 4;
  int calls = 0;
  Rng rng(1);
  const BoResult r = bayes_opt(
      [&](const Point& p) {
        ++calls;
        return -std::abs(p[0] - 0.5);
      },
      b, cfg, rng);
  CHECK(calls == 11);
  CHECK(r.trace.size() == 11);
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    CHECK(r.trace.values[i] <= r.best_value);
    if (i < r.best_index) CHECK(r.trace.values[i] < r.best_value);
  }
  CHECK(r.trace.values[r.best_index] == r.best_value);

  Rng rng2(1);
  int c2 = 0;
  const BoResult flat = bayes_opt([&](const Point&) { return ++c2, 0.5; }, b, cfg, rng2);
  CHECK(flat.best_index == 0);
}

TEST_CASE("bayes_opt is deterministic per seed") {
  const Bounds b{{{{0, 1}, {0, 1}, {0, 1}, {0, 1}}}};
  auto f = [](const Point& p) {
    double s = 0;
    for (double v : p) s -= (v - 0.3) * (v - 0.3);
    return s;
  };
  Rng a(77), c(77);
  const BoResult r1 = bayes_opt(f, b, {}, a), r2 = bayes_opt(f, b, {}, c);
  CHECK(r1.trace == r2.trace);
  CHECK(r1.best_point == r2.best_point);
}

TEST_CASE("non-finite objective values raise ObjectiveError with the point") {
  const Bounds b{{{{0, 1}, {0, 1}, {0, 1}, {0, 1}}}};
  Rng rng(3);
  try {
    bayes_opt([](const Point&) { return std::nan(""); }, b, {}, rng);
    FAIL("expected ObjectiveError");
  } catch (const ObjectiveError& e) {
    for (double v : e.point()) CHECK((v >= 0.0 && v <= 1.0));
  }
  BOConfig bad;
  bad.budget = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("bayes_opt beats random search on a smooth quadratic") {
  const Bounds b{{{{0, 1}, {0, 1}, {0, 1}, {0, 1}}}};
  auto f = [](const Point& p) {
    double s = 0;
    for (double v : p) s -= (v - 0.3) * (v - 0.3);
    return s;
  };
  double bo_sum = 0, rs_sum = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng r1(derive_seed(500, seed)), r2(derive_seed(900, seed));
    bo_sum += bayes_opt(f, b, {}, r1).best_value;
    rs_sum += random_search(f, b, 40, r2).best_value;
  }
  CHECK(bo_sum > rs_sum);
}
