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
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hocforge {

/// Straight (non-premultiplied) RGBA pixel, every channel in [0,1].
struct Rgba {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
  double a = 0.0;

  friend bool operator==(const Rgba&, const Rgba&) = default;
};

inline constexpr Rgba kWhite{1.0, 1.0, 1.0, 1.0};
inline constexpr Rgba kTransparent{0.0, 0.0, 0.0, 0.0};

/// Axis-aligned pixel rectangle. x0/y0 are the top-left column/row.
struct Rect {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;

  int x1() const { return x0 + width; }
  int y1() const { return y0 + height; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Row-major RGBA image with real-valued channels.
///
/// Pixel (x, y) addresses column x and row y. Channels are stored
/// interleaved; 8-bit quantization only happens at file I/O.
class ImageBuffer {
 public:
  /// Throws InvalidArgument unless width >= 1 and height >= 1.
  ImageBuffer(int width, int height, Rgba fill = kTransparent);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  Rgba at(int x, int y) const {
    const double* p = &data_[index(x, y)];
    return {p[0], p[1], p[2], p[3]};
  }
  void set(int x, int y, const Rgba& v) {
    double* p = &data_[index(x, y)];
    p[0] = v.r;
    p[1] = v.g;
    p[2] = v.b;
    p[3] = v.a;
  }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::size_t index(int x, int y) const {
    return (static_cast<std::size_t>(y) * width_ + x) * 4;
  }

  int width_;
  int height_;
  std::vector<double> data_;
};

/// Binary mask, row-major, one byte per pixel (0 or 1).
class Bitmap {
 public:
  Bitmap() = default;
  Bitmap(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }

  bool get(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool v = true) { bits_[index(x, y)] = v ? 1 : 0; }

  std::size_t count() const;
  bool empty_mask() const { return count() == 0; }

  std::span<const std::uint8_t> bits() const { return bits_; }
  std::span<std::uint8_t> bits() { return bits_; }

  friend bool operator==(const Bitmap&, const Bitmap&) = default;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Exact sub-image copy. Throws OutOfBounds when rect leaves the image.
ImageBuffer crop(const ImageBuffer& image, const Rect& rect);

/// Bilinear resize with pixel-center alignment and clamp-to-edge borders.
ImageBuffer resize_bilinear(const ImageBuffer& image, int width, int height);

/// Tight box of the set pixels; nullopt when the mask is empty.
std::optional<Rect> mask_bbox(const Bitmap& mask);

/// Tight box of pixels with alpha > 0; nullopt when fully transparent.
std::optional<Rect> alpha_bbox(const ImageBuffer& image);

/// {alpha >= threshold}
Bitmap alpha_mask(const ImageBuffer& image, double threshold = 0.5);

/// Chebyshev (8-connected) dilation by `radius` pixels.
Bitmap dilate(const Bitmap& mask, int radius);

/// Largest 4-connected component. Ties resolve to the component whose first
/// pixel comes first in row-major order. Empty input yields an empty mask.
Bitmap largest_component(const Bitmap& mask);

}  // namespace hocforge
