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
#include "hocforge/rle.hpp"

#include <string>

#include "hocforge/error.hpp"

namespace hocforge {

Rle encode_rle(const Bitmap& mask) {
  Rle out{mask.height(), mask.width(), {}};
  bool current = false;
  std::uint64_t run = 0;
  for (int x = 0; x < mask.width(); ++x) {
    for (int y = 0; y < mask.height(); ++y) {
      const bool bit = mask.get(x, y);
      if (bit != current) {
        out.counts.push_back(run);
        run = 0;
        current = bit;
      }
      ++run;
    }
  }
  out.counts.push_back(run);
  return out;
}

Bitmap decode_rle(const Rle& rle) {
  if (rle.height < 1 || rle.width < 1) {
    throw InvalidArgument("RLE size must be positive, got " + std::to_string(rle.height) + "x" +
                          std::to_string(rle.width));
  }
  const std::uint64_t total = static_cast<std::uint64_t>(rle.height) * rle.width;
  std::uint64_t sum = 0;
  for (const auto c : rle.counts) sum += c;
  if (sum != total) {
    throw InvalidArgument("RLE counts sum to " + std::to_string(sum) + ", expected " +
                          std::to_string(total));
  }
  Bitmap out(rle.width, rle.height);
  std::uint64_t pos = 0;
  bool bit = false;
  for (const auto c : rle.counts) {
    if (bit) {
      for (std::uint64_t i = pos; i < pos + c; ++i) {
        out.set(static_cast<int>(i / rle.height), static_cast<int>(i % rle.height));
      }
    }
    pos += c;
    bit = !bit;
  }
  return out;
}

std::uint64_t rle_area(const Rle& rle) {
  std::uint64_t area = 0;
  for (std::size_t i = 1; i < rle.counts.size(); i += 2) area += rle.counts[i];
  return area;
}

}  // namespace hocforge
