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

#include "hocforge/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hocforge/error.hpp"

namespace hocforge {

ImageBuffer::ImageBuffer(int width, int height, Rgba fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("image dimensions must be positive, got " + std::to_string(width) +
                          "x" + std::to_string(height));
  }
  data_.resize(pixel_count() * 4);
  for (std::size_t i = 0; i < data_.size(); i += 4) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
    data_[i + 3] = fill.a;
  }
}

Bitmap::Bitmap(int width, int height)
    : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, 0) {
  if (width < 0 || height < 0) {
    throw InvalidArgument("bitmap dimensions must be non-negative");
  }
}

std::size_t Bitmap::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

ImageBuffer crop(const ImageBuffer& image, const Rect& rect) {
  if (rect.width < 1 || rect.height < 1 || rect.x0 < 0 || rect.y0 < 0 ||
      rect.x1() > image.width() || rect.y1() > image.height()) {
    throw OutOfBounds("crop rect (" + std::to_string(rect.x0) + "," + std::to_string(rect.y0) +
                      "," + std::to_string(rect.width) + "," + std::to_string(rect.height) +
                      ") exceeds " + std::to_string(image.width()) + "x" +
                      std::to_string(image.height()) + " image");
  }
  ImageBuffer out(rect.width, rect.height);
  auto src = image.data();
  auto dst = out.data();
  const std::size_t row_len = static_cast<std::size_t>(rect.width) * 4;
  for (int r = 0; r < rect.height; ++r) {
    const std::size_t from = (static_cast<std::size_t>(rect.y0 + r) * image.width() + rect.x0) * 4;
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(from), row_len,
                dst.begin() + static_cast<std::ptrdiff_t>(r * row_len));
  }
  return out;
}

ImageBuffer resize_bilinear(const ImageBuffer& image, int width, int height) {
  ImageBuffer out(width, height);
  if (width == image.width() && height == image.height()) {
    return image;
  }
  const double sx = static_cast<double>(image.width()) / width;
  const double sy = static_cast<double>(image.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, image.height() - 1.0);
    const int y0 = static_cast<int>(std::floor(fy));
    const int y1 = std::min(y0 + 1, image.height() - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, image.width() - 1.0);
      const int x0 = static_cast<int>(std::floor(fx));
      const int x1 = std::min(x0 + 1, image.width() - 1);
      const double wx = fx - x0;
      const Rgba p00 = image.at(x0, y0), p10 = image.at(x1, y0);
      const Rgba p01 = image.at(x0, y1), p11 = image.at(x1, y1);
      auto lerp2 = [&](double a, double b, double c, double d) {
        return std::clamp((1 - wy) * ((1 - wx) * a + wx * b) + wy * ((1 - wx) * c + wx * d), 0.0,
                          1.0);
      };
      out.set(x, y,
              {lerp2(p00.r, p10.r, p01.r, p11.r), lerp2(p00.g, p10.g, p01.g, p11.g),
               lerp2(p00.b, p10.b, p01.b, p11.b), lerp2(p00.a, p10.a, p01.a, p11.a)});
    }
  }
  return out;
}

std::optional<Rect> mask_bbox(const Bitmap& mask) {
  int xmin = mask.width(), ymin = mask.height(), xmax = -1, ymax = -1;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.get(x, y)) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  }
  if (xmax < 0) return std::nullopt;
  return Rect{xmin, ymin, xmax - xmin + 1, ymax - ymin + 1};
}

std::optional<Rect> alpha_bbox(const ImageBuffer& image) {
  int xmin = image.width(), ymin = image.height(), xmax = -1, ymax = -1;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (image.at(x, y).a > 0.0) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  }
  if (xmax < 0) return std::nullopt;
  return Rect{xmin, ymin, xmax - xmin + 1, ymax - ymin + 1};
}

Bitmap alpha_mask(const ImageBuffer& image, double threshold) {
  Bitmap mask(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (image.at(x, y).a >= threshold) mask.set(x, y);
    }
  }
  return mask;
}

Bitmap dilate(const Bitmap& mask, int radius) {
  const int w = mask.width(), h = mask.height();
  if (radius <= 0) return mask;
  // Square structuring element is separable: horizontal pass then vertical.
  Bitmap horiz(w, h);
  std::vector<int> prefix(static_cast<std::size_t>(std::max(w, h)) + 1);
  for (int y = 0; y < h; ++y) {
    prefix[0] = 0;
    for (int x = 0; x < w; ++x) prefix[x + 1] = prefix[x] + (mask.get(x, y) ? 1 : 0);
    for (int x = 0; x < w; ++x) {
      const int lo = std::max(0, x - radius), hi = std::min(w, x + radius + 1);
      if (prefix[hi] - prefix[lo] > 0) horiz.set(x, y);
    }
  }
  Bitmap out(w, h);
  for (int x = 0; x < w; ++x) {
    prefix[0] = 0;
    for (int y = 0; y < h; ++y) prefix[y + 1] = prefix[y] + (horiz.get(x, y) ? 1 : 0);
    for (int y = 0; y < h; ++y) {
      const int lo = std::max(0, y - radius), hi = std::min(h, y + radius + 1);
      if (prefix[hi] - prefix[lo] > 0) out.set(x, y);
    }
  }
  return out;
}

Bitmap largest_component(const Bitmap& mask) {
  const int w = mask.width(), h = mask.height();
  std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
  std::vector<std::size_t> sizes;
  std::vector<int> stack;
  for (int start = 0; start < w * h; ++start) {
    if (label[start] >= 0 || mask.bits()[start] == 0) continue;
    const int id = static_cast<int>(sizes.size());
    std::size_t size = 0;
    stack.push_back(start);
    label[start] = id;
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      ++size;
      const int px = p % w, py = p / w;
      const int nbr[4][2] = {{px - 1, py}, {px + 1, py}, {px, py - 1}, {px, py + 1}};
      for (const auto& n : nbr) {
        if (n[0] < 0 || n[1] < 0 || n[0] >= w || n[1] >= h) continue;
        const int q = n[1] * w + n[0];
        if (label[q] < 0 && mask.bits()[q] != 0) {
          label[q] = id;
          stack.push_back(q);
        }
      }
    }
    sizes.push_back(size);
  }
  Bitmap out(w, h);
  if (sizes.empty()) return out;
  const int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label[i] == best) out.bits()[i] = 1;
  }
  return out;
}

}  // namespace hocforge
