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
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "hocforge/config.hpp"
#include "hocforge/error.hpp"
#include "hocforge/manifest.hpp"
#include "hocforge/rle.hpp"

using namespace hocforge;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// One 6x4 image with a single 2x2 visible square at (1,1).
DatasetManifest one_instance() {
  Bitmap m(6, 4);
  for (int y = 1; y < 3; ++y) {
    for (int x = 1; x < 3; ++x) m.set(x, y);
  }
  DatasetManifest d;
  d.images.push_back({1, "000000.png", 6, 4, std::nullopt});
  d.annotations.push_back({1, 1, 1, {1, 1, 2, 2}, 4, encode_rle(m), 0.125, false});
  d.categories.push_back({1, "object"});
  return d;
}

fs::path write_images(const DatasetManifest& d, const std::string& name) {
  const fs::path dir = fixtures::temp_dir(name);
  for (const auto& im : d.images) write_png(dir / im.file_name, ImageBuffer(im.width, im.height, kWhite));
  return dir;
}

fs::path write_text(const std::string& name, const std::string& text) {
  const fs::path p = fixtures::temp_dir(name) / "config.json";
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("rle worked examples") {
  Bitmap zeros(2, 2), ones(2, 2);
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 2; ++x) ones.set(x, y);
  }
  CHECK(encode_rle(zeros).counts == std::vector<std::uint64_t>{4});
  CHECK(encode_rle(ones).counts == std::vector<std::uint64_t>{0, 4});
  Bitmap col(3, 2);
  col.set(1, 0);
  col.set(1, 1);
  col.set(2, 1);
  // Column-major: col0 = 00, col1 = 11, col2 = 01.
  CHECK(encode_rle(col).counts == std::vector<std::uint64_t>{2, 2, 1, 1});
  CHECK(encode_rle(col).height == 2);
  CHECK(encode_rle(col).width == 3);
  CHECK(rle_area(encode_rle(col)) == 3);
}

TEST_CASE("rle round-trips random masks exactly") {
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const int w = static_cast<int>(uniform_int(rng, 1, 40)), h = static_cast<int>(uniform_int(rng, 1, 40));
    const Bitmap m = fixtures::random_mask(rng, w, h, uniform01(rng));
    REQUIRE(decode_rle(encode_rle(m)) == m);
  }
  CHECK_THROWS_AS(decode_rle({2, 2, {3}}), InvalidArgument);
}

TEST_CASE("manifest serialization is canonical") {
  CHECK(serialize_manifest({}) == R"({"annotations":[],"categories":[],"images":[]})");
  DatasetManifest a = one_instance(), b = one_instance();
  b.images.push_back({2, "000001.png", 6, 4, "references/000001.png"});
  a.images.insert(a.images.begin(), b.images.back());
  CHECK(serialize_manifest(a) == serialize_manifest(b));
  CHECK(parse_manifest(serialize_manifest(b)) == b);
  CHECK(round_manifest_float(0.1234564) == 0.123456);
  CHECK(round_manifest_float(-0.0000001) == 0.0);
}

TEST_CASE("one-instance manifest matches the golden file") {
  const fs::path out = fixtures::temp_dir("golden") / "annotations.json";
  write_manifest(one_instance(), out);
  CHECK(slurp(out) == slurp(fs::path(HOCFORGE_GOLDEN_DIR) / "one_instance.json"));
  CHECK(read_manifest(out) == one_instance());
  CHECK_THROWS_AS(write_manifest(one_instance(), "/nonexistent/dir/a.json"), IoError);
}

TEST_CASE("validation catches tampering") {
  const DatasetManifest good = one_instance();
  const fs::path dir = write_images(good, "validate");
  CHECK(validate_manifest(good, dir).ok());

  DatasetManifest area = good;
  area.annotations[0].area += 1;
  const auto r = validate_manifest(area, dir);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].kind == "area");
  CHECK(*r.violations[0].annotation_id == 1);

  DatasetManifest overlap = good;
  overlap.annotations.push_back(good.annotations[0]);
  overlap.annotations[1].id = 2;
  const auto o = validate_manifest(overlap, dir);
  REQUIRE(o.violations.size() == 1);
  CHECK(o.violations[0].kind == "overlap");

  DatasetManifest flag = good;
  flag.annotations[0].occlusion_fraction = 0.85;
  CHECK(validate_manifest(flag, dir).violations.size() == 1);
  CHECK(validate_manifest(flag, dir, 0.9).ok());

  DatasetManifest bbox = good;
  bbox.annotations[0].bbox = {1, 1, 3, 2};
  CHECK(validate_manifest(bbox, dir).violations[0].kind == "bbox");

  DatasetManifest dangling = good;
  dangling.annotations[0].image_id = 9;
  CHECK(validate_manifest(dangling, dir).violations[0].kind == "dangling_image");

  DatasetManifest size = good;
  size.images[0].width = 7;
  CHECK_FALSE(validate_manifest(size, dir).ok());

  DatasetManifest missing = good;
  missing.images[0].file_name = "absent.png";
  CHECK_THROWS_AS(validate_manifest(missing, dir), IoError);
}

TEST_CASE("minimal config takes the documented defaults") {
  const auto p = write_text("cfg_min", R"({"canvas": [320, 240], "library_dir": "lib"})");
  const SynthesisConfig c = load_config(p);
  CHECK(c.canvas_width == 320);
  CHECK(c.canvas_height == 240);
  CHECK(c.library_dir == p.parent_path() / "lib");
  CHECK(c.n_min == 10);
  CHECK(c.n_max == 30);
  CHECK(c.bo.budget == 30);
  CHECK(c.bo.n_init == 10);
  CHECK(c.gamma_min == 0.8);
  CHECK(c.gamma_max == 1.2);
  CHECK(c.theta_min == 0.0);
  CHECK(c.theta_max == 360.0);
  CHECK_FALSE(c.illumination.sigma.has_value());
  CHECK(c.occlusion_export_max == 0.8);
  CHECK(c.scorer.kind == ScorerSpec::Kind::kHeuristic);
  CHECK(c.placement == PlacementMode::kGuided);
}

TEST_CASE("config errors name the field") {
  auto message = [](const std::string& text) {
    try {
      load_config(write_text("cfg_bad", text));
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message(R"({"canvas": [10, 10], "library_dir": "l", "n_range": [5, 2]})").find("n_range") == 0);
  CHECK(message(R"({"canvas": [10, 10], "library_dir": "l", "colour": 1})").find("colour") == 0);
  CHECK(message(R"({"canvas": [10, 10], "library_dir": "l", "bo": {"budgett": 3}})").find("bo.budgett") == 0);
  CHECK(message(R"({"canvas": [10, 10], "library_dir": "l", "gamma_range": [0, 1]})").find("gamma_range") == 0);
  CHECK(message(R"({"canvas": [10, 10]})").find("library_dir") == 0);
  CHECK(message(R"({"canvas": [10, 10], "library_dir": "l", "seed": -3})").find("seed") == 0);
  CHECK(message(R"({"canvas": [10, 10], "library_dir": "l", "scorer": {"command": "x", "address": "y"}})")
            .find("scorer") == 0);
  CHECK(message("[1, 2]").find("config") == 0);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("full config parses every section") {
  const auto p = write_text("cfg_full", R"({
    "canvas": [128, 96], "library_dir": "/abs/lib", "n_range": [2, 4], "gamma_range": [0.9, 1.1],
    "theta_range": [0, 90], "placement": "random", "seed": 42, "count": 3, "category": "bottle",
    "bo": {"budget": 5, "n_init": 3, "xi": 0.02, "n_restarts": 4, "sweeps": 1,
           "length_scale": [0.5, 0.6, 0.7, 0.8], "signal_variance": 2.0, "jitter": 1e-6},
    "scorer": {"address": "localhost:9000", "timeout_ms": 500},
    "illumination": {"enabled": true, "sigma": 4.5, "reference_pool": ["a.png", "/b.png"]},
    "occlusion_export_max": 0.7})");
  const SynthesisConfig c = load_config(p);
  CHECK(c.library_dir == "/abs/lib");
  CHECK(c.placement == PlacementMode::kRandom);
  CHECK(c.bo.kernel.length_scales[2] == 0.7);
  CHECK(c.scorer.kind == ScorerSpec::Kind::kExternal);
  CHECK(c.scorer.target == "localhost:9000");
  CHECK(c.scorer.timeout.count() == 500);
  CHECK(*c.illumination.sigma == 4.5);
  CHECK(c.illumination.reference_pool[0] == p.parent_path() / "a.png");
  CHECK(c.illumination.reference_pool[1] == "/b.png");
  CHECK(c.occlusion_export_max == 0.7);
  CHECK(c.seed == 42);

  ::setenv("HOCFORGE_SEED", "977", 1);
  SynthesisConfig o = c;
  apply_seed_override(o);
  CHECK(o.seed == 977);
  ::setenv("HOCFORGE_SEED", "12x", 1);
  CHECK_THROWS_AS(apply_seed_override(o), ConfigError);
  ::unsetenv("HOCFORGE_SEED");
}
