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

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hocforge/image.hpp"

namespace hocforge {

/// Single real-valued plane. Values are unbounded.
class Channel2D {
 public:
  Channel2D(int width, int height, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }

  double at(int x, int y) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }
  double& at(int x, int y) { return values_[static_cast<std::size_t>(y) * width_ + x]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double mean() const;

  friend bool operator==(const Channel2D&, const Channel2D&) = default;

 private:
  int width_;
  int height_;
  std::vector<double> values_;
};

/// Gaussian smoothing parameters; radius = ceil(3 sigma), replicate border.
struct BlurSpec {
  double sigma = 1.0;

  int radius() const;
  /// sigma = max(width, height) / 8
  static BlurSpec large_kernel_for(int width, int height);
};

struct HsvPlanes {
  Channel2D h;  ///< degrees in [0, 360)
  Channel2D s;
  Channel2D v;
  Channel2D a;
};

/// Hexcone model. H := 0 when S = 0; alpha passes through.
HsvPlanes rgb_to_hsv(const ImageBuffer& image);

/// Inverse hexcone mapping. S and V are clamped to [0, 1] first and the
/// output channels are clamped to [0, 1].
ImageBuffer hsv_to_rgb(const HsvPlanes& planes);

/// Normalized 1-D Gaussian weights for offsets -radius..radius.
std::vector<double> gaussian_kernel(const BlurSpec& spec);

/// Separable Gaussian blur with replicate border.
Channel2D gaussian_blur(const Channel2D& channel, const BlurSpec& spec);

/// V planes after the illumination transfer, before clamping.
struct ValueTransfer {
  Channel2D synthetic;
  Channel2D real;
};

/// Precomputed per reference image: its V plane and the blurred illumination
/// field. Pure function of (reference, spec), so callers may cache it.
struct IlluminationReference {
  HsvPlanes planes;
  Channel2D illumination;
  double mean_v;

  static IlluminationReference from_image(const ImageBuffer& reference, const BlurSpec& spec);
};

/// V' = V - mean(V) + blur(V_real) on both images, unclamped.
/// Throws ShapeMismatch when dimensions differ.
ValueTransfer transfer_value(const Channel2D& v_synthetic, const IlluminationReference& ref);

/// HSV planes of both images after the transfer, V not yet clamped.
struct IlluminatedPlanes {
  HsvPlanes synthetic;
  HsvPlanes real;
};

IlluminatedPlanes illum_transform_planes(const ImageBuffer& synthetic,
                                         const IlluminationReference& ref);

struct IlluminatedPair {
  ImageBuffer synthetic;
  ImageBuffer real;
};

/// Imposes the real image's smoothed illumination on both images, leaving
/// H, S and A untouched. Throws ShapeMismatch when dimensions differ.
IlluminatedPair illum_transform_pair(const ImageBuffer& synthetic, const ImageBuffer& real,
                                     const BlurSpec& spec);

/// Same as above with a precomputed reference.
IlluminatedPair illum_transform_pair(const ImageBuffer& synthetic,
                                     const IlluminationReference& ref);

}  // namespace hocforge
