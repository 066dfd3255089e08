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

#include <string>

#include "hocforge/image.hpp"
#include "hocforge/scene.hpp"

namespace hocforge {

/// Background color sampled from the frame border, with the soft-threshold
/// band (Euclidean RGB distance) separating background from object.
struct BackgroundModel {
  double r = 1.0;
  double g = 1.0;
  double b = 1.0;
  double tolerance_lo = 0.08;
  double tolerance_hi = 0.25;

  void validate() const;
};

/// Mean color of the border band whose thickness is `border_fraction` of each
/// dimension (at least one pixel). The object is assumed to sit in the middle.
BackgroundModel estimate_background(const ImageBuffer& frame, double border_fraction = 0.05,
                                    double tolerance_lo = 0.08, double tolerance_hi = 0.25);

/// clamp((d - lo) / (hi - lo), 0, 1) with d the distance to the background.
double soft_alpha(const Rgba& pixel, const BackgroundModel& bg);

/// Soft matte of every pixel before component cleanup.
ImageBuffer soft_matte(const ImageBuffer& frame, const BackgroundModel& bg);

/// Distance matting followed by keeping only the largest 4-connected
/// component of {alpha >= 0.5}; every other pixel becomes transparent. The
/// result is tight-cropped. Throws NoForeground when nothing reaches 0.5.
Cutout extract_cutout(const ImageBuffer& frame, const BackgroundModel& bg,
                      std::string source_id = {});

}  // namespace hocforge
