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

#include "hocforge/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hocforge/error.hpp"

namespace hocforge {
namespace {

// cos/sin in degrees, exact at quarter turns so those stay pixel permutations.
std::pair<double, double> cos_sin_degrees(double theta) {
  double t = std::fmod(theta, 360.0);
  if (t < 0) t += 360.0;
  if (t == 0.0) return {1.0, 0.0};
  if (t == 90.0) return {0.0, 1.0};
  if (t == 180.0) return {-1.0, 0.0};
  if (t == 270.0) return {0.0, -1.0};
  const double rad = t * std::numbers::pi / 180.0;
  return {std::cos(rad), std::sin(rad)};
}

Rgba fetch_or_transparent(const ImageBuffer& img, int x, int y) {
  if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) return kTransparent;
  return img.at(x, y);
}

Rgba sample_bilinear(const ImageBuffer& img, double sx, double sy) {
  const double fx0 = std::floor(sx), fy0 = std::floor(sy);
  const int x0 = static_cast<int>(fx0), y0 = static_cast<int>(fy0);
  const double fx = sx - fx0, fy = sy - fy0;
  const Rgba p00 = fetch_or_transparent(img, x0, y0);
  const Rgba p10 = fetch_or_transparent(img, x0 + 1, y0);
  const Rgba p01 = fetch_or_transparent(img, x0, y0 + 1);
  const Rgba p11 = fetch_or_transparent(img, x0 + 1, y0 + 1);
  auto mix = [&](double a, double b, double c, double d) {
    const double v = (1 - fy) * ((1 - fx) * a + fx * b) + fy * ((1 - fx) * c + fx * d);
    return std::clamp(v, 0.0, 1.0);
  };
  return {mix(p00.r, p10.r, p01.r, p11.r), mix(p00.g, p10.g, p01.g, p11.g),
          mix(p00.b, p10.b, p01.b, p11.b), mix(p00.a, p10.a, p01.a, p11.a)};
}

}  // namespace

Rgba flatten_on_white(const Rgba& p) {
  const double k = 1.0 - p.a;
  return {std::min(1.0, p.r * p.a + k), std::min(1.0, p.g * p.a + k),
          std::min(1.0, p.b * p.a + k), 1.0};
}

bool is_tight(const ImageBuffer& sprite) {
  const auto box = alpha_bbox(sprite);
  return box && *box == Rect{0, 0, sprite.width(), sprite.height()};
}

Cutout make_cutout(const ImageBuffer& sprite, std::string source_id) {
  const auto box = alpha_bbox(sprite);
  if (!box) throw DegenerateTransform("cutout '" + source_id + "' is fully transparent");
  return {crop(sprite, *box), std::move(source_id)};
}

Cutout transform_cutout(const Cutout& cutout, double theta, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma) || !std::isfinite(theta)) {
    throw InvalidArgument("transform requires finite theta and gamma > 0");
  }
  const ImageBuffer& src = cutout.sprite;
  const auto [c, s] = cos_sin_degrees(theta);
  const double w = src.width(), h = src.height();
  const double ext_x = (std::abs(c) * w + std::abs(s) * h) * gamma;
  const double ext_y = (std::abs(s) * w + std::abs(c) * h) * gamma;
  if (ext_x < 0.5 || ext_y < 0.5) {
    throw DegenerateTransform("transform (theta=" + std::to_string(theta) + ", gamma=" +
                              std::to_string(gamma) + ") shrinks '" + cutout.source_id +
                              "' below one pixel");
  }
  const int out_w = std::max(1, static_cast<int>(std::ceil(ext_x - 1e-9)));
  const int out_h = std::max(1, static_cast<int>(std::ceil(ext_y - 1e-9)));

  ImageBuffer out(out_w, out_h);
  for (int r = 0; r < out_h; ++r) {
    const double v = r + 0.5 - out_h / 2.0;
    for (int col = 0; col < out_w; ++col) {
      const double u = col + 0.5 - out_w / 2.0;
      // Inverse of the forward map (u, v) = gamma * R(theta) * (x, y).
      const double xs = (c * u - s * v) / gamma;
      const double ys = (s * u + c * v) / gamma;
      out.set(col, r, sample_bilinear(src, xs + w / 2.0 - 0.5, ys + h / 2.0 - 0.5));
    }
  }
  const auto box = alpha_bbox(out);
  if (!box) {
    throw DegenerateTransform("transform (theta=" + std::to_string(theta) +
                              ", gamma=" + std::to_string(gamma) + ") of '" +
                              cutout.source_id + "' leaves no visible pixel");
  }
  return {crop(out, *box), cutout.source_id};
}

std::pair<int, int> placement_origin(int w, int h, double x, double y) {
  return {static_cast<int>(std::floor(x - w / 2.0 + 0.5)),
          static_cast<int>(std::floor(y - h / 2.0 + 0.5))};
}

SceneState SceneState::blank(int width, int height) {
  return {ImageBuffer(width, height, kWhite), {}, Bitmap(width, height)};
}

Rgba over(const Rgba& top, const Rgba& bottom) {
  const double a = top.a + bottom.a * (1.0 - top.a);
  if (a <= 0.0) return kTransparent;
  const double wb = bottom.a * (1.0 - top.a);
  auto ch = [&](double t, double b) { return std::clamp((t * top.a + b * wb) / a, 0.0, 1.0); };
  return {ch(top.r, bottom.r), ch(top.g, bottom.g), ch(top.b, bottom.b), std::min(a, 1.0)};
}

SceneState composite_under(SceneState scene, const Cutout& transformed,
                           const Placement& placement) {
  const ImageBuffer& sprite = transformed.sprite;
  const auto [ox, oy] = placement_origin(sprite.width(), sprite.height(), placement.x, placement.y);
  if (ox < 0 || oy < 0 || ox + sprite.width() > scene.width() ||
      oy + sprite.height() > scene.height()) {
    throw OutOfBounds("sprite " + std::to_string(sprite.width()) + "x" +
                      std::to_string(sprite.height()) + " centered at (" +
                      std::to_string(placement.x) + "," + std::to_string(placement.y) +
                      ") leaves the " + std::to_string(scene.width()) + "x" +
                      std::to_string(scene.height()) + " canvas");
  }

  Bitmap full(scene.width(), scene.height());
  Bitmap visible(scene.width(), scene.height());
  for (int sy = 0; sy < sprite.height(); ++sy) {
    for (int sx = 0; sx < sprite.width(); ++sx) {
      const Rgba p = sprite.at(sx, sy);
      if (p.a < 0.5) continue;
      const int cx = ox + sx, cy = oy + sy;
      full.set(cx, cy);
      if (scene.occupancy.get(cx, cy)) continue;
      visible.set(cx, cy);
      scene.canvas.set(cx, cy, flatten_on_white(p));
    }
  }
  auto occ = scene.occupancy.bits();
  auto fb = full.bits();
  for (std::size_t i = 0; i < occ.size(); ++i) occ[i] |= fb[i];

  scene.instances.push_back({transformed.source_id, placement, std::move(full), std::move(visible)});
  return scene;
}

double occlusion_fraction(const SceneState& scene, std::size_t index) {
  if (index >= scene.instances.size()) {
    throw InvalidArgument("instance index " + std::to_string(index) + " out of range");
  }
  const Instance& inst = scene.instances[index];
  const std::size_t full = inst.full_mask.count();
  if (full == 0) {
    throw DegenerateInstance("instance " + std::to_string(index) + " has an empty full mask");
  }
  return 1.0 - static_cast<double>(inst.visible_mask.count()) / static_cast<double>(full);
}

Rect tight_bbox(const SceneState& scene) {
  const auto box = mask_bbox(scene.occupancy);
  if (!box) throw EmptyScene("scene occupancy is empty");
  return *box;
}

}  // namespace hocforge
