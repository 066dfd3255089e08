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

#include "hocforge/color.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hocforge/error.hpp"

namespace hocforge {
namespace {

void require_same_shape(int w0, int h0, int w1, int h1) {
  if (w0 != w1 || h0 != h1) {
    throw ShapeMismatch("shape mismatch: " + std::to_string(w0) + "x" + std::to_string(h0) +
                        " vs " + std::to_string(w1) + "x" + std::to_string(h1));
  }
}

}  // namespace

Channel2D::Channel2D(int width, int height, double fill)
    : width_(width), height_(height), values_(static_cast<std::size_t>(width) * height, fill) {
  if (width < 1 || height < 1) throw InvalidArgument("channel dimensions must be positive");
}

double Channel2D::mean() const {
  // Shifted summation: exact for constant planes, and better conditioned.
  const double pivot = values_.front();
  double acc = 0.0;
  for (double v : values_) acc += v - pivot;
  return pivot + acc / static_cast<double>(values_.size());
}

int BlurSpec::radius() const { return static_cast<int>(std::ceil(3.0 * sigma)); }

BlurSpec BlurSpec::large_kernel_for(int width, int height) {
  return {static_cast<double>(std::max(width, height)) / 8.0};
}

HsvPlanes rgb_to_hsv(const ImageBuffer& image) {
  const int w = image.width(), h = image.height();
  HsvPlanes out{Channel2D(w, h), Channel2D(w, h), Channel2D(w, h), Channel2D(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Rgba p = image.at(x, y);
      const double mx = std::max({p.r, p.g, p.b});
      const double mn = std::min({p.r, p.g, p.b});
      const double d = mx - mn;
      double hue = 0.0;
      if (d > 0.0) {
        if (mx == p.r) {
          hue = 60.0 * std::fmod((p.g - p.b) / d, 6.0);
        } else if (mx == p.g) {
          hue = 60.0 * ((p.b - p.r) / d + 2.0);
        } else {
          hue = 60.0 * ((p.r - p.g) / d + 4.0);
        }
        if (hue < 0.0) hue += 360.0;
        if (hue >= 360.0) hue -= 360.0;
      }
      out.h.at(x, y) = hue;
      out.s.at(x, y) = mx > 0.0 ? d / mx : 0.0;
      out.v.at(x, y) = mx;
      out.a.at(x, y) = p.a;
    }
  }
  return out;
}

ImageBuffer hsv_to_rgb(const HsvPlanes& planes) {
  const int w = planes.v.width(), h = planes.v.height();
  require_same_shape(w, h, planes.h.width(), planes.h.height());
  require_same_shape(w, h, planes.s.width(), planes.s.height());
  require_same_shape(w, h, planes.a.width(), planes.a.height());
  ImageBuffer out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = std::clamp(planes.v.at(x, y), 0.0, 1.0);
      const double s = std::clamp(planes.s.at(x, y), 0.0, 1.0);
      const double sector = planes.h.at(x, y) / 60.0;
      const double fl = std::floor(sector);
      const double f = sector - fl;
      const int i = ((static_cast<int>(fl) % 6) + 6) % 6;
      const double p = v * (1.0 - s);
      const double q = v * (1.0 - s * f);
      const double t = v * (1.0 - s * (1.0 - f));
      double r = 0, g = 0, b = 0;
      switch (i) {
        case 0: r = v, g = t, b = p; break;
        case 1: r = q, g = v, b = p; break;
        case 2: r = p, g = v, b = t; break;
        case 3: r = p, g = q, b = v; break;
        case 4: r = t, g = p, b = v; break;
        default: r = v, g = p, b = q; break;
      }
      out.set(x, y,
              {std::clamp(r, 0.0, 1.0), std::clamp(g, 0.0, 1.0), std::clamp(b, 0.0, 1.0),
               std::clamp(planes.a.at(x, y), 0.0, 1.0)});
    }
  }
  return out;
}

std::vector<double> gaussian_kernel(const BlurSpec& spec) {
  if (!(spec.sigma > 0.0)) throw InvalidArgument("blur sigma must be positive");
  const int radius = spec.radius();
  std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(static_cast<double>(i) * i) / (2.0 * spec.sigma * spec.sigma));
    w[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

Channel2D gaussian_blur(const Channel2D& channel, const BlurSpec& spec) {
  const auto kernel = gaussian_kernel(spec);
  const int radius = spec.radius();
  const int w = channel.width(), h = channel.height();

  // out = x_c + sum_i k_i (x_{c+i} - x_c): mathematically the plain weighted
  // sum (weights sum to one) and exact on constant regions.
  Channel2D tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double centre = channel.at(x, y);
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const int xx = std::clamp(x + i, 0, w - 1);
        acc += kernel[static_cast<std::size_t>(i + radius)] * (channel.at(xx, y) - centre);
      }
      tmp.at(x, y) = centre + acc;
    }
  }
  Channel2D out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double centre = tmp.at(x, y);
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const int yy = std::clamp(y + i, 0, h - 1);
        acc += kernel[static_cast<std::size_t>(i + radius)] * (tmp.at(x, yy) - centre);
      }
      out.at(x, y) = centre + acc;
    }
  }
  return out;
}

IlluminationReference IlluminationReference::from_image(const ImageBuffer& reference,
                                                        const BlurSpec& spec) {
  HsvPlanes planes = rgb_to_hsv(reference);
  Channel2D illumination = gaussian_blur(planes.v, spec);
  const double mean_v = planes.v.mean();
  return {std::move(planes), std::move(illumination), mean_v};
}

ValueTransfer transfer_value(const Channel2D& v_synthetic, const IlluminationReference& ref) {
  require_same_shape(v_synthetic.width(), v_synthetic.height(), ref.planes.v.width(),
                     ref.planes.v.height());
  const double mean_syn = v_synthetic.mean();
  ValueTransfer out{Channel2D(v_synthetic.width(), v_synthetic.height()),
                    Channel2D(v_synthetic.width(), v_synthetic.height())};
  auto syn = v_synthetic.values();
  auto real = ref.planes.v.values();
  auto blur = ref.illumination.values();
  auto out_syn = out.synthetic.values();
  auto out_real = out.real.values();
  for (std::size_t i = 0; i < syn.size(); ++i) {
    out_syn[i] = syn[i] - mean_syn + blur[i];
    out_real[i] = real[i] - ref.mean_v + blur[i];
  }
  return out;
}

IlluminatedPlanes illum_transform_planes(const ImageBuffer& synthetic,
                                         const IlluminationReference& ref) {
  HsvPlanes syn = rgb_to_hsv(synthetic);
  ValueTransfer vt = transfer_value(syn.v, ref);
  syn.v = std::move(vt.synthetic);
  return {std::move(syn), HsvPlanes{ref.planes.h, ref.planes.s, std::move(vt.real), ref.planes.a}};
}

IlluminatedPair illum_transform_pair(const ImageBuffer& synthetic,
                                     const IlluminationReference& ref) {
  const IlluminatedPlanes planes = illum_transform_planes(synthetic, ref);
  return {hsv_to_rgb(planes.synthetic), hsv_to_rgb(planes.real)};
}

IlluminatedPair illum_transform_pair(const ImageBuffer& synthetic, const ImageBuffer& real,
                                     const BlurSpec& spec) {
  require_same_shape(synthetic.width(), synthetic.height(), real.width(), real.height());
  return illum_transform_pair(synthetic, IlluminationReference::from_image(real, spec));
}

}  // namespace hocforge
