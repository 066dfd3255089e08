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

#include "hocforge/png_io.hpp"

#include <openssl/evp.h>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "hocforge/error.hpp"

namespace hocforge {
namespace {

std::vector<std::uint8_t> to_bytes(const ImageBuffer& image, PngChannels channels) {
  const int stride = channels == PngChannels::kRgba ? 4 : 3;
  std::vector<std::uint8_t> out(image.pixel_count() * stride);
  auto src = image.data();
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    for (int c = 0; c < stride; ++c) out[i * stride + c] = quantize8(src[i * 4 + c]);
  }
  return out;
}

ImageBuffer from_rgba_bytes(const std::vector<std::uint8_t>& bytes, int width, int height) {
  ImageBuffer img(width, height);
  auto dst = img.data();
  for (std::size_t i = 0; i < bytes.size(); ++i) dst[i] = bytes[i] / 255.0;
  return img;
}

png_image make_write_header(const ImageBuffer& image, PngChannels channels) {
  png_image header;
  std::memset(&header, 0, sizeof header);
  header.version = PNG_IMAGE_VERSION;
  header.width = static_cast<png_uint_32>(image.width());
  header.height = static_cast<png_uint_32>(image.height());
  header.format = channels == PngChannels::kRgba ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
  return header;
}

ImageBuffer finish_read(png_image& header, const std::string& what) {
  header.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(header));
  if (!png_image_finish_read(&header, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = header.message;
    png_image_free(&header);
    throw IoError("cannot decode PNG " + what + ": " + msg);
  }
  return from_rgba_bytes(buffer, static_cast<int>(header.width), static_cast<int>(header.height));
}

}  // namespace

std::uint8_t quantize8(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

ImageBuffer read_png(const std::filesystem::path& path) {
  png_image header;
  std::memset(&header, 0, sizeof header);
  header.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&header, path.c_str())) {
    throw IoError("cannot read PNG '" + path.string() + "': " + header.message);
  }
  return finish_read(header, "'" + path.string() + "'");
}

void write_png(const std::filesystem::path& path, const ImageBuffer& image, PngChannels channels) {
  png_image header = make_write_header(image, channels);
  const auto bytes = to_bytes(image, channels);
  if (!png_image_write_to_file(&header, path.c_str(), 0, bytes.data(), 0, nullptr)) {
    throw IoError("cannot write PNG '" + path.string() + "': " + header.message);
  }
}

std::vector<std::uint8_t> encode_png(const ImageBuffer& image, PngChannels channels) {
  png_image header = make_write_header(image, channels);
  const auto bytes = to_bytes(image, channels);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&header, nullptr, &size, 0, bytes.data(), 0, nullptr)) {
    throw IoError(std::string("cannot size PNG buffer: ") + header.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&header, out.data(), &size, 0, bytes.data(), 0, nullptr)) {
    throw IoError(std::string("cannot encode PNG: ") + header.message);
  }
  out.resize(size);
  return out;
}

ImageBuffer decode_png(std::span<const std::uint8_t> bytes) {
  png_image header;
  std::memset(&header, 0, sizeof header);
  header.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&header, bytes.data(), bytes.size())) {
    throw IoError(std::string("cannot decode PNG buffer: ") + header.message);
  }
  return finish_read(header, "buffer");
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::optional<std::vector<std::uint8_t>> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) return std::nullopt;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool alnum = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    const bool pad_ok = c == '=' && i + 2 >= text.size() &&
                        (i + 1 == text.size() || text[i + 1] == '=');
    if (!alnum && c != '+' && c != '/' && !pad_ok) return std::nullopt;
  }
  std::vector<std::uint8_t> out(3 * (text.size() / 4));
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) return std::nullopt;
  std::size_t padding = 0;
  if (!text.empty() && text.back() == '=') ++padding;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++padding;
  out.resize(static_cast<std::size_t>(n) - padding);
  return out;
}

}  // namespace hocforge
