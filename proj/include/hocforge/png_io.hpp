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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hocforge/image.hpp"

namespace hocforge {

enum class PngChannels { kRgb, kRgba };

/// Reads an 8-bit PNG (gray, RGB or RGBA; expanded to RGBA). Throws IoError.
ImageBuffer read_png(const std::filesystem::path& path);

/// Quantizes to 8 bits (round to nearest) and writes. Throws IoError.
void write_png(const std::filesystem::path& path, const ImageBuffer& image,
               PngChannels channels = PngChannels::kRgba);

std::vector<std::uint8_t> encode_png(const ImageBuffer& image,
                                     PngChannels channels = PngChannels::kRgba);

/// Throws IoError on undecodable input.
ImageBuffer decode_png(std::span<const std::uint8_t> bytes);

/// Round-to-nearest 8-bit quantization of one channel value.
std::uint8_t quantize8(double v);

std::string base64_encode(std::span<const std::uint8_t> bytes);

/// Strict RFC 4648 decoding; nullopt on malformed input.
std::optional<std::vector<std::uint8_t>> base64_decode(std::string_view text);

}  // namespace hocforge
