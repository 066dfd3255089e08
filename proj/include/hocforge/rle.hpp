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

#include <cstdint>
#include <vector>

#include "hocforge/image.hpp"

namespace hocforge {

/// Uncompressed run-length encoding of a binary mask: column-major runs,
/// alternating zeros and ones, starting with zeros.
struct Rle {
  int height = 0;
  int width = 0;
  std::vector<std::uint64_t> counts;

  friend bool operator==(const Rle&, const Rle&) = default;
};

Rle encode_rle(const Bitmap& mask);

/// Throws InvalidArgument when the runs do not cover height * width pixels.
Bitmap decode_rle(const Rle& rle);

/// Number of ones, read directly from the runs.
std::uint64_t rle_area(const Rle& rle);

}  // namespace hocforge
