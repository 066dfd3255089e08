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
#include "hocforge/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "hocforge/error.hpp"
#include "hocforge/png_io.hpp"

namespace hocforge {
namespace {

using nlohmann::json;

std::string format_float(double v) {
  if (!std::isfinite(v)) throw InvalidArgument("manifest floats must be finite");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

// Compact writer over nlohmann's sorted object map; floats get fixed precision.
void emit(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += json(key).dump();
        out += ':';
        emit(value, out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        emit(j[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float:
      out += format_float(j.get<double>());
      break;
    default:
      out += j.dump(-1, ' ', false, json::error_handler_t::strict);
  }
}

json to_json(const Rle& rle) {
  return {{"counts", rle.counts}, {"size", {rle.height, rle.width}}};
}

template <typename T>
T field(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + "." + key + ": missing");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

}  // namespace

double round_manifest_float(double v) { return std::stod(format_float(v)); }

std::string serialize_manifest(const DatasetManifest& manifest) {
  auto images = manifest.images;
  auto annotations = manifest.annotations;
  auto categories = manifest.categories;
  auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::stable_sort(images.begin(), images.end(), by_id);
  std::stable_sort(annotations.begin(), annotations.end(), by_id);
  std::stable_sort(categories.begin(), categories.end(), by_id);

  json doc = {{"images", json::array()}, {"annotations", json::array()}, {"categories", json::array()}};
  for (const auto& im : images) {
    json r = {{"id", im.id}, {"file_name", im.file_name}, {"width", im.width}, {"height", im.height}};
    if (im.reference_image) r["reference_image"] = *im.reference_image;
    doc["images"].push_back(std::move(r));
  }
  for (const auto& a : annotations) {
    doc["annotations"].push_back({{"id", a.id},
                                  {"image_id", a.image_id},
                                  {"category_id", a.category_id},
                                  {"bbox", a.bbox},
                                  {"area", a.area},
                                  {"segmentation", to_json(a.segmentation)},
                                  {"occlusion_fraction", a.occlusion_fraction},
                                  {"iscrowd", 0},
                                  {"excluded", a.excluded}});
  }
  for (const auto& c : categories) doc["categories"].push_back({{"id", c.id}, {"name", c.name}});
  std::string out;
  emit(doc, out);
  return out;
}

DatasetManifest parse_manifest(std::string_view text) {
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("manifest: not valid JSON");
  require_object(doc, "manifest");
  DatasetManifest m;
  for (const char* key : {"images", "annotations", "categories"}) {
    if (!doc.contains(key) || !doc[key].is_array()) {
      throw ConfigError(std::string("manifest.") + key + ": expected an array");
    }
  }
  for (std::size_t i = 0; i < doc["images"].size(); ++i) {
    const json& r = doc["images"][i];
    const std::string where = "images[" + std::to_string(i) + "]";
    require_object(r, where);
    ImageRecord im;
    im.id = field<std::int64_t>(r, "id", where);
    im.file_name = field<std::string>(r, "file_name", where);
    im.width = field<int>(r, "width", where);
    im.height = field<int>(r, "height", where);
    if (r.contains("reference_image")) im.reference_image = field<std::string>(r, "reference_image", where);
    m.images.push_back(std::move(im));
  }
  for (std::size_t i = 0; i < doc["annotations"].size(); ++i) {
    const json& r = doc["annotations"][i];
    const std::string where = "annotations[" + std::to_string(i) + "]";
    require_object(r, where);
    AnnotationRecord a;
    a.id = field<std::int64_t>(r, "id", where);
    a.image_id = field<std::int64_t>(r, "image_id", where);
    a.category_id = field<std::int64_t>(r, "category_id", where);
    a.bbox = field<std::array<int, 4>>(r, "bbox", where);
    a.area = field<std::uint64_t>(r, "area", where);
    a.occlusion_fraction = field<double>(r, "occlusion_fraction", where);
    a.excluded = field<bool>(r, "excluded", where);
    const json seg = field<json>(r, "segmentation", where);
    require_object(seg, where + ".segmentation");
    const auto size = field<std::array<int, 2>>(seg, "size", where + ".segmentation");
    a.segmentation = {size[0], size[1],
                      field<std::vector<std::uint64_t>>(seg, "counts", where + ".segmentation")};
    m.annotations.push_back(std::move(a));
  }
  for (std::size_t i = 0; i < doc["categories"].size(); ++i) {
    const json& r = doc["categories"][i];
    const std::string where = "categories[" + std::to_string(i) + "]";
    require_object(r, where);
    m.categories.push_back({field<std::int64_t>(r, "id", where), field<std::string>(r, "name", where)});
  }
  return m;
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  const std::string bytes = serialize_manifest(manifest);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

ValidationReport validate_manifest(const DatasetManifest& manifest,
                                   const std::filesystem::path& image_dir,
                                   double occlusion_export_max) {
  ValidationReport report;
  auto add = [&](std::string kind, std::optional<std::int64_t> ann, std::optional<std::int64_t> img,
                 std::string message) {
    report.violations.push_back({std::move(kind), ann, img, std::move(message)});
  };

  std::map<std::int64_t, const ImageRecord*> images;
  for (const auto& im : manifest.images) {
    if (!images.emplace(im.id, &im).second) {
      add("duplicate_id", std::nullopt, im.id, "image id " + std::to_string(im.id) + " repeats");
      continue;
    }
    const ImageBuffer pixels = read_png(image_dir / im.file_name);
    if (pixels.width() != im.width || pixels.height() != im.height) {
      add("image_size", std::nullopt, im.id,
          im.file_name + " is " + std::to_string(pixels.width()) + "x" +
              std::to_string(pixels.height()) + ", manifest says " + std::to_string(im.width) +
              "x" + std::to_string(im.height));
    }
  }
  std::set<std::int64_t> categories;
  for (const auto& c : manifest.categories) {
    if (!categories.insert(c.id).second) {
      add("duplicate_id", std::nullopt, std::nullopt, "category id " + std::to_string(c.id) + " repeats");
    }
  }

  std::set<std::int64_t> annotation_ids;
  // Union of visible masks seen so far per image, plus which annotation owns each pixel.
  std::map<std::int64_t, std::vector<std::int64_t>> owners;
  for (const auto& a : manifest.annotations) {
    const std::string name = "annotation " + std::to_string(a.id);
    if (!annotation_ids.insert(a.id).second) {
      add("duplicate_id", a.id, a.image_id, name + " repeats");
    }
    if (!categories.contains(a.category_id)) {
      add("dangling_category", a.id, a.image_id,
          name + " references missing category " + std::to_string(a.category_id));
    }
    const auto im = images.find(a.image_id);
    if (im == images.end()) {
      add("dangling_image", a.id, a.image_id,
          name + " references missing image " + std::to_string(a.image_id));
      continue;
    }
    const Rle& rle = a.segmentation;
    if (rle.height != im->second->height || rle.width != im->second->width) {
      add("rle_size", a.id, a.image_id,
          name + " RLE is " + std::to_string(rle.height) + "x" + std::to_string(rle.width) +
              " (h x w), image is " + std::to_string(im->second->height) + "x" +
              std::to_string(im->second->width));
      continue;
    }
    Bitmap mask;
    try {
      mask = decode_rle(rle);
    } catch (const InvalidArgument& e) {
      add("rle_counts", a.id, a.image_id, name + ": " + e.what());
      continue;
    }
    const std::uint64_t area = mask.count();
    if (area != a.area) {
      add("area", a.id, a.image_id,
          name + " area " + std::to_string(a.area) + " but mask has " + std::to_string(area));
    }
    const auto box = mask_bbox(mask);
    const std::array<int, 4> expect =
        box ? std::array<int, 4>{box->x0, box->y0, box->width, box->height} : std::array<int, 4>{};
    if (expect != a.bbox) {
      add("bbox", a.id, a.image_id, name + " bbox does not match its mask");
    }
    if (!(a.occlusion_fraction >= 0.0 && a.occlusion_fraction <= 1.0)) {
      add("occlusion_range", a.id, a.image_id, name + " occlusion_fraction outside [0,1]");
    }
    if (a.excluded != (a.occlusion_fraction >= occlusion_export_max)) {
      add("excluded_flag", a.id, a.image_id,
          name + " excluded=" + (a.excluded ? "true" : "false") + " disagrees with occlusion " +
              format_float(a.occlusion_fraction));
    }
    auto& own = owners[a.image_id];
    if (own.empty()) own.assign(static_cast<std::size_t>(rle.height) * rle.width, -1);
    std::set<std::int64_t> clashes;
    for (int y = 0; y < mask.height(); ++y) {
      for (int x = 0; x < mask.width(); ++x) {
        if (!mask.get(x, y)) continue;
        auto& o = own[static_cast<std::size_t>(y) * mask.width() + x];
        if (o >= 0) clashes.insert(o);
        else o = a.id;
      }
    }
    for (const auto other : clashes) {
      add("overlap", a.id, a.image_id,
          name + " overlaps annotation " + std::to_string(other));
    }
  }
  return report;
}

}  // namespace hocforge
