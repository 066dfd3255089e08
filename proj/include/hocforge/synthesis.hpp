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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hocforge/bayesopt.hpp"
#include "hocforge/color.hpp"
#include "hocforge/config.hpp"
#include "hocforge/manifest.hpp"
#include "hocforge/random.hpp"
#include "hocforge/rle.hpp"
#include "hocforge/scene.hpp"
#include "hocforge/scorer.hpp"

namespace hocforge {

/// Dilation radius used for the contact_ratio metadata.
inline constexpr int kContactRadius = 3;

/// Every *.png in `dir` in lexicographic order, tight-cropped, with the file
/// stem as source_id. Throws IoError for a missing directory and ConfigError
/// when it holds no PNG.
std::vector<Cutout> load_library(const std::filesystem::path& dir);

/// Search box for one object: theta and gamma from the config, (x, y) shrunk
/// so the largest possible footprint (gamma_max, any theta) stays on the
/// canvas. Throws DegenerateConfig when no position fits.
Bounds placement_bounds(const Cutout& cutout, const SynthesisConfig& config);

/// Placement for a native-unit search point; theta wraps into [0, 360).
Placement placement_from_point(const Point& p);

/// Samples a cutout, theta and gamma uniformly and centers the object on a
/// white canvas. Throws DegenerateConfig when it does not fit.
SceneState place_first(const std::vector<Cutout>& library, const SynthesisConfig& config, Rng& rng);

/// Geometry and pixels of a candidate placement, without copying the scene.
struct PlacementPreview {
  ImageBuffer crop;  ///< tight-bbox crop of the candidate composite
  ScoreMetadata metadata;
};

/// Per-iteration state shared by every candidate of one BO run.
class PreviewContext {
 public:
  explicit PreviewContext(const SceneState& scene, int contact_radius = kContactRadius);

  /// Equals crop(composite_under(scene, transformed, p).canvas, new tight bbox)
  /// plus the new object's occlusion and contact ratio.
  PlacementPreview preview(const Cutout& transformed, const Placement& placement) const;

 private:
  const SceneState& scene_;
  Bitmap dilated_;
  Rect prior_box_;
};

/// What one placement iteration did.
struct PlacementStep {
  std::size_t cutout_index = 0;
  Placement placement;
  double score = 0.0;
  std::size_t scorer_calls = 0;
  std::optional<BoResult> bo;  ///< guided placements only
};

/// Samples a cutout uniformly and places it at the BO argmax of the scorer
/// over placement_bounds(). Throws InvalidArgument on an empty scene.
SceneState place_next(const SceneState& scene, const std::vector<Cutout>& library, Scorer& scorer,
                      const SynthesisConfig& config, Rng& rng, PlacementStep* step = nullptr);

/// Baseline: uniform placement over the same bounds, no scorer.
SceneState place_random(const SceneState& scene, const std::vector<Cutout>& library,
                        const SynthesisConfig& config, Rng& rng, PlacementStep* step = nullptr);

struct InstanceAnnotation {
  std::string category;
  std::string cutout_id;
  Placement placement;
  std::array<int, 4> bbox{};  ///< tight around the visible mask; zeros when empty
  std::uint64_t area = 0;     ///< visible pixels
  double occlusion_fraction = 0.0;  ///< rounded to six decimals
  Rle segmentation;
  bool excluded = false;
};

struct SceneAnnotation {
  int width = 0;
  int height = 0;
  std::vector<InstanceAnnotation> instances;
};

/// Annotations from the final masks. An instance with an empty full mask
/// counts as fully occluded.
SceneAnnotation annotate_scene(const SceneState& scene, const std::string& category,
                               double occlusion_export_max);

/// Real images resized to the canvas with their illumination fields cached.
struct ReferencePool {
  std::vector<std::filesystem::path> paths;
  std::vector<IlluminationReference> references;

  /// Empty when illumination is disabled. Throws ConfigError for an enabled
  /// config with an empty pool.
  static ReferencePool load(const SynthesisConfig& config);
};

struct GeneratedScene {
  SceneState scene;
  ImageBuffer image;  ///< canvas, relit when illumination is enabled
  SceneAnnotation annotation;
  std::optional<std::size_t> reference_index;
  std::optional<ImageBuffer> reference;  ///< relit reference, for inspection
  std::vector<PlacementStep> steps;
  std::size_t scorer_calls = 0;
};

/// N ~ U{n_min..n_max}, place_first, then N - 1 guided or random placements,
/// then the optional illumination transfer. `scorer` may be null in random
/// mode; `references` may be null when illumination is disabled.
GeneratedScene generate_scene(const std::vector<Cutout>& library, const SynthesisConfig& config,
                              Scorer* scorer, const ReferencePool* references, Rng& rng);

/// Builds the scorer a config asks for.
std::unique_ptr<Scorer> make_scorer(const ScorerSpec& spec);

struct DatasetOptions {
  int workers = 1;
  bool debug_overlay = false;
  /// One scorer per worker. Defaults to make_scorer(config.scorer).
  std::function<std::unique_ptr<Scorer>()> scorer_factory;
};

/// Generates config.count scenes (scene i seeded with derive_seed(seed, i))
/// into out_dir/images, out_dir/references (illumination) and
/// out_dir/overlays (debug), and writes out_dir/annotations.json. Output
/// bytes do not depend on the worker count.
DatasetManifest generate_dataset(const SynthesisConfig& config, const std::filesystem::path& out_dir,
                                 const DatasetOptions& options = {});

/// Visible masks tinted with distinct colors at 50% over the image.
ImageBuffer debug_overlay(const ImageBuffer& image, const SceneState& scene);

/// For each instance k > 0: share of its full mask within kContactRadius of
/// instances 0..k-1.
std::vector<double> contact_ratios(const SceneState& scene, int contact_radius = kContactRadius);

}  // namespace hocforge
