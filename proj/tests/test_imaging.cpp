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

#include <array>
#include <cmath>

#include "fixtures.hpp"
#include "hocforge/error.hpp"
#include "hocforge/image.hpp"
#include "hocforge/scene.hpp"

using namespace hocforge;

namespace {

Bitmap brute_union(const SceneState& s) {
  Bitmap u(s.width(), s.height());
  for (const auto& inst : s.instances) {
    for (int y = 0; y < s.height(); ++y) {
      for (int x = 0; x < s.width(); ++x) {
        if (inst.full_mask.get(x, y)) u.set(x, y);
      }
    }
  }
  return u;
}

// Re-rasterizes gamma * R(theta) of a sprite by inverting the 2x2 forward
// matrix numerically and sampling the source bilinearly.
ImageBuffer inverse_map_oracle(const std::function<double(int, int)>& src_alpha, int w, int h,
                               double theta, double gamma) {
  const double t = theta * M_PI / 180.0;
  const std::array<double, 4> fwd{gamma * std::cos(t), -gamma * std::sin(t), gamma * std::sin(t),
                                   gamma * std::cos(t)};
  const double det = fwd[0] * fwd[3] - fwd[1] * fwd[2];
  const std::array<double, 4> inv{fwd[3] / det, -fwd[1] / det, -fwd[2] / det, fwd[0] / det};
  double min_x = 1e9, max_x = -1e9, min_y = 1e9, max_y = -1e9;
  for (const auto& [cx, cy] : std::array<std::pair<double, double>, 4>{
           {{-w / 2.0, -h / 2.0}, {w / 2.0, -h / 2.0}, {-w / 2.0, h / 2.0}, {w / 2.0, h / 2.0}}}) {
    const double u = fwd[0] * cx + fwd[1] * cy, v = fwd[2] * cx + fwd[3] * cy;
    min_x = std::min(min_x, u), max_x = std::max(max_x, u);
    min_y = std::min(min_y, v), max_y = std::max(max_y, v);
  }
  const int ow = static_cast<int>(std::ceil(max_x - min_x - 1e-9));
  const int oh = static_cast<int>(std::ceil(max_y - min_y - 1e-9));
  auto alpha_at = [&](int x, int y) { return x < 0 || y < 0 || x >= w || y >= h ? 0.0 : src_alpha(x, y); };
  ImageBuffer out(ow, oh);
  for (int r = 0; r < oh; ++r) {
    for (int c = 0; c < ow; ++c) {
      const double u = c + 0.5 - ow / 2.0, v = r + 0.5 - oh / 2.0;
      const double sx = inv[0] * u + inv[1] * v + w / 2.0 - 0.5;
      const double sy = inv[2] * u + inv[3] * v + h / 2.0 - 0.5;
      const int x0 = static_cast<int>(std::floor(sx)), y0 = static_cast<int>(std::floor(sy));
      const double fx = sx - x0, fy = sy - y0;
      const double a = (1 - fx) * (1 - fy) * alpha_at(x0, y0) + fx * (1 - fy) * alpha_at(x0 + 1, y0) +
                       (1 - fx) * fy * alpha_at(x0, y0 + 1) + fx * fy * alpha_at(x0 + 1, y0 + 1);
      out.set(c, r, {1, 1, 1, a});
    }
  }
  const auto box = alpha_bbox(out);
  REQUIRE(box);
  return crop(out, *box);
}

}  // namespace

TEST_CASE("image buffer rejects empty sizes") {
  CHECK_THROWS_AS(ImageBuffer(0, 3), InvalidArgument);
  CHECK_THROWS_AS(ImageBuffer(3, -1), InvalidArgument);
}

TEST_CASE("crop copies exactly") {
  Rng rng(3);
  const ImageBuffer img = fixtures::random_image(rng, 17, 11, true);
  CHECK(crop(img, {0, 0, 17, 11}) == img);
  CHECK(crop(img, {4, 6, 1, 1}).at(0, 0) == img.at(4, 6));
  for (int trial = 0; trial < 50; ++trial) {
    const int x0 = static_cast<int>(uniform_int(rng, 0, 16)), y0 = static_cast<int>(uniform_int(rng, 0, 10));
    const int w = static_cast<int>(uniform_int(rng, 1, 17 - x0)), h = static_cast<int>(uniform_int(rng, 1, 11 - y0));
    const ImageBuffer c = crop(img, {x0, y0, w, h});
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) REQUIRE(c.at(x, y) == img.at(x0 + x, y0 + y));
    }
  }
  CHECK_THROWS_AS(crop(img, {10, 0, 8, 1}), OutOfBounds);
  CHECK_THROWS_AS(crop(img, {-1, 0, 2, 2}), OutOfBounds);
  CHECK_THROWS_AS(crop(img, {0, 0, 0, 2}), OutOfBounds);
}

TEST_CASE("dilate matches a brute-force Chebyshev neighborhood") {
  Rng rng(5);
  const Bitmap m = fixtures::random_mask(rng, 23, 19, 0.03);
  for (int r : {0, 1, 3}) {
    const Bitmap d = dilate(m, r);
    for (int y = 0; y < 19; ++y) {
      for (int x = 0; x < 23; ++x) {
        bool any = false;
        for (int dy = -r; dy <= r && !any; ++dy) {
          for (int dx = -r; dx <= r && !any; ++dx) {
            const int xx = x + dx, yy = y + dy;
            any = xx >= 0 && yy >= 0 && xx < 23 && yy < 19 && m.get(xx, yy);
          }
        }
        REQUIRE(d.get(x, y) == any);
      }
    }
  }
}

TEST_CASE("largest component keeps the biggest 4-connected blob") {
  Bitmap m(8, 4);
  m.set(0, 0);
  m.set(1, 1);  // diagonal neighbor: separate component
  for (int x = 3; x < 7; ++x) m.set(x, 2);
  const Bitmap k = largest_component(m);
  CHECK(k.count() == 4);
  CHECK(k.get(3, 2));
  CHECK_FALSE(k.get(0, 0));
  CHECK(largest_component(Bitmap(3, 3)).empty_mask());
}

TEST_CASE("transform identity and quarter turns are exact") {
  Rng rng(11);
  const Cutout c = make_cutout(fixtures::random_image(rng, 7, 5, true), "r");
  CHECK(transform_cutout(c, 0, 1).sprite == c.sprite);
  const Cutout q = transform_cutout(c, 90, 1);
  REQUIRE(q.sprite.width() == 5);
  REQUIRE(q.sprite.height() == 7);
  for (int r = 0; r < 7; ++r) {
    for (int col = 0; col < 5; ++col) REQUIRE(q.sprite.at(col, r) == c.sprite.at(7 - 1 - r, col));
  }
  const Cutout h = transform_cutout(c, 180, 1);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 7; ++x) REQUIRE(h.sprite.at(x, y) == c.sprite.at(6 - x, 4 - y));
  }
  const Cutout t = transform_cutout(c, 270, 1);
  for (int r = 0; r < 7; ++r) {
    for (int col = 0; col < 5; ++col) REQUIRE(t.sprite.at(col, r) == c.sprite.at(r, 4 - col));
  }
}

TEST_CASE("45 degree half-scale disc agrees with the inverse-map oracle") {
  const ImageBuffer src = fixtures::disc(100, 48.0, {0.3, 0.5, 0.7, 1.0});
  const Cutout c = make_cutout(src, "disc");
  const Cutout t = transform_cutout(c, 45, 0.5);
  const int w = c.sprite.width(), h = c.sprite.height();
  const ImageBuffer oracle =
      inverse_map_oracle([&](int x, int y) { return c.sprite.at(x, y).a; }, w, h, 45, 0.5);
  REQUIRE(oracle.width() == t.sprite.width());
  REQUIRE(oracle.height() == t.sprite.height());
  double worst = 0;
  for (int y = 0; y < oracle.height(); ++y) {
    for (int x = 0; x < oracle.width(); ++x) {
      worst = std::max(worst, std::abs(oracle.at(x, y).a - t.sprite.at(x, y).a));
    }
  }
  CHECK(worst <= 2.0 / 255.0);
}

TEST_CASE("transforms stay tight and reject bad arguments") {
  Rng rng(2);
  for (int i = 0; i < 30; ++i) {
    const Cutout c = fixtures::random_cutout(rng, 5, 30, i % 2 == 0);
    const Cutout t = transform_cutout(c, uniform(rng, 0, 360), uniform(rng, 0.5, 1.5));
    REQUIRE(is_tight(t.sprite));
  }
  const Cutout c = make_cutout(fixtures::opaque_square(4), "s");
  CHECK_THROWS_AS(transform_cutout(c, 0, 0), InvalidArgument);
  CHECK_THROWS_AS(transform_cutout(c, 0, 1e-6), DegenerateTransform);
  CHECK_THROWS_AS(make_cutout(ImageBuffer(3, 3), "empty"), DegenerateTransform);
}

TEST_CASE("composite_under worked examples") {
  const Cutout sq = make_cutout(fixtures::opaque_square(10), "sq");
  SceneState s = composite_under(SceneState::blank(40, 40), sq, {0, 1, 20, 20});
  CHECK(s.instances[0].visible_mask == s.instances[0].full_mask);
  CHECK(occlusion_fraction(s, 0) == 0.0);
  for (int y = 15; y < 25; ++y) {
    for (int x = 15; x < 25; ++x) REQUIRE(s.canvas.at(x, y) == Rgba{0.2, 0.4, 0.6, 1.0});
  }
  CHECK(s.canvas.at(14, 14) == kWhite);
  CHECK(tight_bbox(s) == Rect{15, 15, 10, 10});

  const SceneState buried = composite_under(s, make_cutout(fixtures::opaque_square(10, {1, 0, 0, 1}), "r"),
                                            {0, 1, 20, 20});
  CHECK(buried.canvas == s.canvas);
  CHECK(buried.instances[1].visible_mask.empty_mask());
  CHECK(occlusion_fraction(buried, 1) == 1.0);

  const SceneState offset = composite_under(s, sq, {0, 1, 25, 25});
  CHECK(offset.instances[1].visible_mask.count() == 75);
  CHECK(occlusion_fraction(offset, 1) == 0.25);
  CHECK(tight_bbox(offset) == Rect{15, 15, 15, 15});

  CHECK_THROWS_AS(composite_under(s, sq, {0, 1, 4, 20}), OutOfBounds);
  CHECK_THROWS_AS(composite_under(s, sq, {0, 1, 36, 20}), OutOfBounds);
  CHECK_THROWS_AS(tight_bbox(SceneState::blank(5, 5)), EmptyScene);
  CHECK_THROWS_AS(occlusion_fraction(s, 3), InvalidArgument);
}

TEST_CASE("tight bbox of single pixel and full canvas") {
  SceneState s = SceneState::blank(10, 10);
  s.occupancy.set(3, 7);
  CHECK(tight_bbox(s) == Rect{3, 7, 1, 1});
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 10; ++x) s.occupancy.set(x, y);
  }
  CHECK(tight_bbox(s) == Rect{0, 0, 10, 10});
}

TEST_CASE("random placement sequences keep the compositing invariants") {
  Rng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    SceneState s = SceneState::blank(64, 64);
    const int n = static_cast<int>(uniform_int(rng, 5, 15));
    std::vector<double> occ_at_placement;
    for (int k = 0; k < n; ++k) {
      const Cutout c = fixtures::random_cutout(rng, 4, 20, uniform01(rng) < 0.5);
      const Cutout t = transform_cutout(c, uniform(rng, 0, 360), uniform(rng, 0.8, 1.2));
      const double x = uniform(rng, t.sprite.width() / 2.0 + 1, 64 - t.sprite.width() / 2.0 - 1);
      const double y = uniform(rng, t.sprite.height() / 2.0 + 1, 64 - t.sprite.height() / 2.0 - 1);
      const SceneState next = composite_under(s, t, {0, 1, x, y});
      for (int yy = 0; yy < 64; ++yy) {
        for (int xx = 0; xx < 64; ++xx) {
          if (s.occupancy.get(xx, yy)) REQUIRE(next.canvas.at(xx, yy) == s.canvas.at(xx, yy));
          if (!next.occupancy.get(xx, yy)) REQUIRE(next.canvas.at(xx, yy) == kWhite);
        }
      }
      for (std::size_t i = 0; i < s.instances.size(); ++i) {
        REQUIRE(next.instances[i].visible_mask == s.instances[i].visible_mask);
      }
      s = next;
    }
    REQUIRE(brute_union(s) == s.occupancy);
    for (int yy = 0; yy < 64; ++yy) {
      for (int xx = 0; xx < 64; ++xx) {
        int owners = 0;
        for (const auto& inst : s.instances) {
          owners += inst.visible_mask.get(xx, yy);
          if (inst.visible_mask.get(xx, yy)) REQUIRE(inst.full_mask.get(xx, yy));
        }
        REQUIRE(owners == (s.occupancy.get(xx, yy) ? 1 : 0));
      }
    }
  }
}
