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
#include <utility>
#include <vector>

#include "hocforge/image.hpp"

namespace hocforge {

/// Single-object RGBA sprite with a soft matte.
///
/// The sprite is tight: its first/last rows and columns each contain a pixel
/// with alpha > 0. Use make_cutout() to build one from an arbitrary sprite.
struct Cutout {
  ImageBuffer sprite;
  std::string source_id;

  friend bool operator==(const Cutout&, const Cutout&) = default;
};

/// Crops `sprite` to its alpha > 0 support. Throws DegenerateTransform when
/// the sprite is fully transparent.
Cutout make_cutout(const ImageBuffer& sprite, std::string source_id);

/// True when the sprite's alpha > 0 bounding box spans the full sprite.
bool is_tight(const ImageBuffer& sprite);

/// Rotation (degrees, counter-clockwise as displayed), uniform scale, and the
/// canvas position of the transformed sprite's center.
struct Placement {
  double theta = 0.0;
  double gamma = 1.0;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Placement&, const Placement&) = default;
};

/// Rotates about the sprite center by `theta` degrees, then scales by
/// `gamma`, with bilinear resampling of all four channels and transparent
/// samples outside the source. Quarter turns at gamma = 1 are exact pixel
/// permutations. Throws DegenerateTransform when the result is under half a
/// pixel wide or tall, or when nothing survives.
Cutout transform_cutout(const Cutout& cutout, double theta, double gamma);

/// Top-left canvas pixel of a w x h sprite whose center is at (x, y).
std::pair<int, int> placement_origin(int w, int h, double x, double y);

struct Instance {
  std::string cutout_id;
  Placement placement;
  Bitmap full_mask;
  Bitmap visible_mask;
};

/// Canvas after k placements, white where nothing is placed. Visible masks
/// partition `occupancy`, the union of all full masks, and are listed in
/// placement order.
struct SceneState {
  ImageBuffer canvas;
  std::vector<Instance> instances;
  Bitmap occupancy;

  static SceneState blank(int width, int height);

  int width() const { return canvas.width(); }
  int height() const { return canvas.height(); }
};

/// Draws an already transformed cutout beneath every existing object with its
/// center at (x, y).
///
/// The new full mask is {alpha >= 0.5}; its visible mask is the part not
/// already occupied, and only those pixels are painted (sprite OVER white).
/// Occupied pixels stay bit-identical, so earlier objects occlude later ones.
/// Throws OutOfBounds if the sprite leaves the canvas.
SceneState composite_under(SceneState scene, const Cutout& transformed, const Placement& placement);

/// 1 - |visible| / |full|. Throws DegenerateInstance for an empty full mask.
double occlusion_fraction(const SceneState& scene, std::size_t index);

/// Minimal rectangle around the occupancy. Throws EmptyScene when empty.
Rect tight_bbox(const SceneState& scene);

/// Straight-alpha `top` OVER `bottom`.
Rgba over(const Rgba& top, const Rgba& bottom);

/// `p` OVER opaque white.
Rgba flatten_on_white(const Rgba& p);

}  // namespace hocforge
