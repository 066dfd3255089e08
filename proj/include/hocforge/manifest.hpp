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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hocforge/rle.hpp"

namespace hocforge {

struct ImageRecord {
  std::int64_t id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;
  std::optional<std::string> reference_image;

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct AnnotationRecord {
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  std::int64_t category_id = 0;
  std::array<int, 4> bbox{};  ///< x, y, w, h of the visible mask; zeros when empty
  std::uint64_t area = 0;
  Rle segmentation;
  double occlusion_fraction = 0.0;
  bool excluded = false;

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

struct CategoryRecord {
  std::int64_t id = 0;
  std::string name;

  friend bool operator==(const CategoryRecord&, const CategoryRecord&) = default;
};

/// COCO-style dataset description with per-annotation occlusion fraction and
/// exclusion flag.
struct DatasetManifest {
  std::vector<ImageRecord> images;
  std::vector<AnnotationRecord> annotations;
  std::vector<CategoryRecord> categories;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

/// Rounds to the 6 decimal digits the manifest stores.
double round_manifest_float(double v);

/// Canonical compact JSON: records ordered by id, keys sorted, floats with
/// six decimals, trailing newline omitted. Throws InvalidArgument on
/// non-finite floats.
std::string serialize_manifest(const DatasetManifest& manifest);

/// Throws ConfigError naming the offending field on malformed input.
DatasetManifest parse_manifest(std::string_view text);

/// Throws IoError with the path on failure.
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);

struct Violation {
  std::string kind;
  std::optional<std::int64_t> annotation_id;
  std::optional<std::int64_t> image_id;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

/// Re-derives area and bbox from every RLE, checks references, id
/// uniqueness, image files and sizes, pairwise disjointness of visible masks
/// per image, and excluded == (occlusion_fraction >= occlusion_export_max).
/// Throws IoError when an image file cannot be read.
ValidationReport validate_manifest(const DatasetManifest& manifest,
                                   const std::filesystem::path& image_dir,
                                   double occlusion_export_max = 0.8);

}  // namespace hocforge
