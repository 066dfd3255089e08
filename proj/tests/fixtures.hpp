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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "hocforge/image.hpp"
#include "hocforge/png_io.hpp"
#include "hocforge/random.hpp"
#include "hocforge/scene.hpp"

namespace fixtures {

using namespace hocforge;

inline ImageBuffer opaque_square(int side, Rgba color = {0.2, 0.4, 0.6, 1.0}) {
  return ImageBuffer(side, side, color);
}

/// Disc of radius r with a linear alpha ramp `soft` pixels wide at the rim.
inline ImageBuffer disc(int size, double radius, Rgba color, double soft = 0.0) {
  ImageBuffer img(size, size, kTransparent);
  const double c = size / 2.0;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double d = std::hypot(x + 0.5 - c, y + 0.5 - c);
      double a = d <= radius ? 1.0 : 0.0;
      if (soft > 0.0) a = std::clamp((radius + soft / 2 - d) / soft, 0.0, 1.0);
      if (a > 0.0) img.set(x, y, {color.r, color.g, color.b, a});
    }
  }
  return img;
}

/// Random-colored sprite: an ellipse, optionally with a soft rim.
inline Cutout random_cutout(Rng& rng, int min_side, int max_side, bool soft) {
  const int w = static_cast<int>(uniform_int(rng, min_side, max_side));
  const int h = static_cast<int>(uniform_int(rng, min_side, max_side));
  const Rgba color{uniform(rng, 0.05, 0.9), uniform(rng, 0.05, 0.9), uniform(rng, 0.05, 0.9), 1.0};
  ImageBuffer img(w, h, kTransparent);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = (x + 0.5 - w / 2.0) / (w / 2.0), dy = (y + 0.5 - h / 2.0) / (h / 2.0);
      const double r = std::sqrt(dx * dx + dy * dy);
      double a = r <= 1.0 ? 1.0 : 0.0;
      if (soft) a = std::clamp((1.0 - r) * 4.0, 0.0, 1.0);
      if (a > 0.0) img.set(x, y, {color.r * (0.8 + 0.2 * dx * dx), color.g, color.b, a});
    }
  }
  return make_cutout(img, "c" + std::to_string(w) + "x" + std::to_string(h));
}

inline ImageBuffer random_image(Rng& rng, int w, int h, bool random_alpha = false) {
  ImageBuffer img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.set(x, y, {uniform01(rng), uniform01(rng), uniform01(rng), random_alpha ? uniform01(rng) : 1.0});
    }
  }
  return img;
}

inline Bitmap random_mask(Rng& rng, int w, int h, double p) {
  Bitmap m(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (uniform01(rng) < p) m.set(x, y);
    }
  }
  return m;
}

/// Writes a small library of soft-edged ellipse cutouts as PNGs.
inline void write_library(const std::filesystem::path& dir, int n, std::uint64_t seed, int min_side = 16,
                          int max_side = 28) {
  std::filesystem::create_directories(dir);
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const Cutout c = random_cutout(rng, min_side, max_side, i % 2 == 0);
    write_png(dir / ("obj" + std::to_string(i) + ".png"), c.sprite, PngChannels::kRgba);
  }
}

/// Fresh directory under the build tree's temp area.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("hocforge_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace fixtures
