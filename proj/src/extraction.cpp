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

#include "hocforge/extraction.hpp"

#include <algorithm>
#include <cmath>

#include "hocforge/error.hpp"

namespace hocforge {

void BackgroundModel::validate() const {
  if (!(tolerance_lo > 0.0 && tolerance_lo < tolerance_hi)) {
    throw InvalidArgument("background tolerances must satisfy 0 < lo < hi");
  }
}

BackgroundModel estimate_background(const ImageBuffer& frame, double border_fraction,
                                    double tolerance_lo, double tolerance_hi) {
  if (!(border_fraction > 0.0 && border_fraction < 0.5)) {
    throw InvalidArgument("border fraction must lie in (0, 0.5)");
  }
  const int bx = std::max(1, static_cast<int>(std::floor(frame.width() * border_fraction)));
  const int by = std::max(1, static_cast<int>(std::floor(frame.height() * border_fraction)));
  double r = 0, g = 0, b = 0;
  std::size_t n = 0;
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      const bool in_band =
          x < bx || y < by || x >= frame.width() - bx || y >= frame.height() - by;
      if (!in_band) continue;
      const Rgba p = frame.at(x, y);
      r += p.r;
      g += p.g;
      b += p.b;
      ++n;
    }
  }
  BackgroundModel bg{r / n, g / n, b / n, tolerance_lo, tolerance_hi};
  bg.validate();
  return bg;
}

double soft_alpha(const Rgba& pixel, const BackgroundModel& bg) {
  const double d = std::sqrt((pixel.r - bg.r) * (pixel.r - bg.r) +
                             (pixel.g - bg.g) * (pixel.g - bg.g) +
                             (pixel.b - bg.b) * (pixel.b - bg.b));
  return std::clamp((d - bg.tolerance_lo) / (bg.tolerance_hi - bg.tolerance_lo), 0.0, 1.0);
}

ImageBuffer soft_matte(const ImageBuffer& frame, const BackgroundModel& bg) {
  bg.validate();
  ImageBuffer out(frame.width(), frame.height());
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      Rgba p = frame.at(x, y);
      p.a = soft_alpha(p, bg);
      out.set(x, y, p);
    }
  }
  return out;
}

Cutout extract_cutout(const ImageBuffer& frame, const BackgroundModel& bg, std::string source_id) {
  ImageBuffer matte = soft_matte(frame, bg);
  const Bitmap keep = largest_component(alpha_mask(matte, 0.5));
  if (keep.empty_mask()) {
    throw NoForeground("no pixel of '" + source_id + "' separates from the background");
  }
  for (int y = 0; y < matte.height(); ++y) {
    for (int x = 0; x < matte.width(); ++x) {
      if (!keep.get(x, y)) matte.set(x, y, kTransparent);
    }
  }
  return make_cutout(matte, std::move(source_id));
}

}  // namespace hocforge
