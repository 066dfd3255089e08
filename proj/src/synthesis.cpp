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
#include "hocforge/synthesis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "hocforge/error.hpp"
#include "hocforge/png_io.hpp"
#include "hocforge/scorer_client.hpp"

namespace hocforge {
namespace {

double wrap_degrees(double theta) {
  double t = std::fmod(theta, 360.0);
  if (t < 0.0) t += 360.0;
  return t >= 360.0 ? 0.0 : t;
}

const Cutout& sample_cutout(const std::vector<Cutout>& library, Rng& rng, std::size_t* index) {
  if (library.empty()) throw InvalidArgument("cutout library is empty");
  const auto i = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(library.size()) - 1));
  if (index) *index = i;
  return library[i];
}

Rect union_rect(const Rect& a, const Rect& b) {
  const int x0 = std::min(a.x0, b.x0), y0 = std::min(a.y0, b.y0);
  const int x1 = std::max(a.x1(), b.x1()), y1 = std::max(a.y1(), b.y1());
  return {x0, y0, x1 - x0, y1 - y0};
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::string scene_file_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu.png", i);
  return buf;
}

}  // namespace

std::vector<Cutout> load_library(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("cutout library " + dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("library_dir: " + dir.string() + " holds no .png cutouts");
  std::vector<Cutout> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(make_cutout(read_png(f), f.stem().string()));
  return out;
}

Bounds placement_bounds(const Cutout& cutout, const SynthesisConfig& config) {
  const double w = cutout.sprite.width(), h = cutout.sprite.height();
  const double d = std::ceil(std::sqrt(w * w + h * h) * config.gamma_max) + 1.0;
  const double x_lo = d / 2.0, x_hi = config.canvas_width - d / 2.0;
  const double y_lo = d / 2.0, y_hi = config.canvas_height - d / 2.0;
  if (x_lo > x_hi || y_lo > y_hi) {
    throw DegenerateConfig("cutout '" + cutout.source_id + "' needs a " + std::to_string(static_cast<int>(d)) +
                           " px square at gamma_max, larger than the " +
                           std::to_string(config.canvas_width) + "x" +
                           std::to_string(config.canvas_height) + " canvas");
  }
  Bounds b{{{{config.theta_min, config.theta_max},
             {config.gamma_min, config.gamma_max},
             {x_lo, x_hi},
             {y_lo, y_hi}}}};
  b.validate();
  return b;
}

Placement placement_from_point(const Point& p) { return {wrap_degrees(p[0]), p[1], p[2], p[3]}; }

SceneState place_first(const std::vector<Cutout>& library, const SynthesisConfig& config, Rng& rng) {
  const Cutout& cutout = sample_cutout(library, rng, nullptr);
  const double theta = wrap_degrees(uniform(rng, config.theta_min, config.theta_max));
  const double gamma = uniform(rng, config.gamma_min, config.gamma_max);
  const Cutout t = transform_cutout(cutout, theta, gamma);
  if (t.sprite.width() > config.canvas_width || t.sprite.height() > config.canvas_height) {
    throw DegenerateConfig("first object '" + cutout.source_id + "' (" +
                           std::to_string(t.sprite.width()) + "x" + std::to_string(t.sprite.height()) +
                           ") does not fit the canvas");
  }
  const Placement p{theta, gamma, config.canvas_width / 2.0, config.canvas_height / 2.0};
  return composite_under(SceneState::blank(config.canvas_width, config.canvas_height), t, p);
}

PreviewContext::PreviewContext(const SceneState& scene, int contact_radius)
    : scene_(scene), dilated_(dilate(scene.occupancy, contact_radius)) {
  const auto box = mask_bbox(scene.occupancy);
  if (!box) throw InvalidArgument("preview needs a scene with at least one object");
  prior_box_ = *box;
}

PlacementPreview PreviewContext::preview(const Cutout& transformed, const Placement& placement) const {
  const ImageBuffer& sprite = transformed.sprite;
  const auto [ox, oy] = placement_origin(sprite.width(), sprite.height(), placement.x, placement.y);
  if (ox < 0 || oy < 0 || ox + sprite.width() > scene_.width() || oy + sprite.height() > scene_.height()) {
    throw OutOfBounds("candidate placement leaves the canvas");
  }
  std::size_t full = 0, visible = 0, touching = 0;
  int bx0 = scene_.width(), by0 = scene_.height(), bx1 = -1, by1 = -1;
  for (int sy = 0; sy < sprite.height(); ++sy) {
    for (int sx = 0; sx < sprite.width(); ++sx) {
      if (sprite.at(sx, sy).a < 0.5) continue;
      const int cx = ox + sx, cy = oy + sy;
      ++full;
      if (!scene_.occupancy.get(cx, cy)) ++visible;
      if (dilated_.get(cx, cy)) ++touching;
      bx0 = std::min(bx0, cx);
      by0 = std::min(by0, cy);
      bx1 = std::max(bx1, cx);
      by1 = std::max(by1, cy);
    }
  }
  Rect box = prior_box_;
  if (full > 0) box = union_rect(box, Rect{bx0, by0, bx1 - bx0 + 1, by1 - by0 + 1});

  PlacementPreview out{crop(scene_.canvas, box), {}};
  const int ix0 = std::max(ox, box.x0), iy0 = std::max(oy, box.y0);
  const int ix1 = std::min(ox + sprite.width(), box.x1()), iy1 = std::min(oy + sprite.height(), box.y1());
  for (int cy = iy0; cy < iy1; ++cy) {
    for (int cx = ix0; cx < ix1; ++cx) {
      const Rgba p = sprite.at(cx - ox, cy - oy);
      if (p.a < 0.5 || scene_.occupancy.get(cx, cy)) continue;
      out.crop.set(cx - box.x0, cy - box.y0, flatten_on_white(p));
    }
  }
  out.metadata.k = static_cast<int>(scene_.instances.size()) + 1;
  out.metadata.occlusion_new = full == 0 ? 1.0 : 1.0 - static_cast<double>(visible) / static_cast<double>(full);
  out.metadata.contact_ratio = full == 0 ? 0.0 : static_cast<double>(touching) / static_cast<double>(full);
  return out;
}

SceneState place_next(const SceneState& scene, const std::vector<Cutout>& library, Scorer& scorer,
                      const SynthesisConfig& config, Rng& rng, PlacementStep* step) {
  if (scene.instances.empty()) throw InvalidArgument("place_next needs a scene with at least one object");
  std::size_t index = 0;
  const Cutout& cutout = sample_cutout(library, rng, &index);
  const Bounds bounds = placement_bounds(cutout, config);
  const PreviewContext context(scene);
  std::size_t calls = 0;
  const Objective objective = [&](const Point& p) {
    const Placement placement = placement_from_point(p);
    const Cutout t = transform_cutout(cutout, placement.theta, placement.gamma);
    PlacementPreview pv = context.preview(t, placement);
    ++calls;
    return scorer.score(ScoreRequest{std::move(pv.crop), pv.metadata}).value;
  };
  BoResult result = bayes_opt(objective, bounds, config.bo, rng);
  const Placement best = placement_from_point(result.best_point);
  SceneState next = composite_under(scene, transform_cutout(cutout, best.theta, best.gamma), best);
  if (step) *step = {index, best, result.best_value, calls, std::move(result)};
  return next;
}

SceneState place_random(const SceneState& scene, const std::vector<Cutout>& library,
                        const SynthesisConfig& config, Rng& rng, PlacementStep* step) {
  if (scene.instances.empty()) throw InvalidArgument("place_random needs a scene with at least one object");
  std::size_t index = 0;
  const Cutout& cutout = sample_cutout(library, rng, &index);
  const Bounds bounds = placement_bounds(cutout, config);
  Point u;
  for (auto& v : u) v = uniform01(rng);
  const Placement p = placement_from_point(bounds.denormalize(u));
  SceneState next = composite_under(scene, transform_cutout(cutout, p.theta, p.gamma), p);
  if (step) *step = {index, p, 0.0, 0, std::nullopt};
  return next;
}

SceneAnnotation annotate_scene(const SceneState& scene, const std::string& category,
                               double occlusion_export_max) {
  SceneAnnotation out{scene.width(), scene.height(), {}};
  for (const Instance& inst : scene.instances) {
    InstanceAnnotation a;
    a.category = category;
    a.cutout_id = inst.cutout_id;
    a.placement = inst.placement;
    a.area = inst.visible_mask.count();
    if (const auto box = mask_bbox(inst.visible_mask)) a.bbox = {box->x0, box->y0, box->width, box->height};
    const std::size_t full = inst.full_mask.count();
    const double occ = full == 0 ? 1.0 : 1.0 - static_cast<double>(a.area) / static_cast<double>(full);
    // Decide the flag on the stored value so readers of the manifest agree.
    a.occlusion_fraction = round_manifest_float(occ);
    a.excluded = a.occlusion_fraction >= occlusion_export_max;
    a.segmentation = encode_rle(inst.visible_mask);
    out.instances.push_back(std::move(a));
  }
  return out;
}

ReferencePool ReferencePool::load(const SynthesisConfig& config) {
  ReferencePool pool;
  if (!config.illumination.enabled) return pool;
  if (config.illumination.reference_pool.empty()) {
    throw ConfigError("illumination.reference_pool: must be non-empty when illumination is enabled");
  }
  const BlurSpec spec = config.illumination.sigma
                            ? BlurSpec{*config.illumination.sigma}
                            : BlurSpec::large_kernel_for(config.canvas_width, config.canvas_height);
  for (const auto& path : config.illumination.reference_pool) {
    ImageBuffer img = read_png(path);
    if (img.width() != config.canvas_width || img.height() != config.canvas_height) {
      img = resize_bilinear(img, config.canvas_width, config.canvas_height);
    }
    pool.paths.push_back(path);
    pool.references.push_back(IlluminationReference::from_image(img, spec));
  }
  return pool;
}

GeneratedScene generate_scene(const std::vector<Cutout>& library, const SynthesisConfig& config,
                              Scorer* scorer, const ReferencePool* references, Rng& rng) {
  config.validate();
  if (config.placement == PlacementMode::kGuided && scorer == nullptr) {
    throw InvalidArgument("guided placement needs a scorer");
  }
  if (config.illumination.enabled && (references == nullptr || references->references.empty())) {
    throw ConfigError("illumination.reference_pool: must be non-empty when illumination is enabled");
  }
  const int n = static_cast<int>(uniform_int(rng, config.n_min, config.n_max));
  GeneratedScene out{place_first(library, config, rng), ImageBuffer(1, 1), {}, {}, {}, {}, 0};
  for (int k = 1; k < n; ++k) {
    PlacementStep step;
    out.scene = config.placement == PlacementMode::kGuided
                    ? place_next(out.scene, library, *scorer, config, rng, &step)
                    : place_random(out.scene, library, config, rng, &step);
    out.scorer_calls += step.scorer_calls;
    out.steps.push_back(std::move(step));
  }
  out.image = out.scene.canvas;
  if (config.illumination.enabled) {
    const auto idx = static_cast<std::size_t>(
        uniform_int(rng, 0, static_cast<std::int64_t>(references->references.size()) - 1));
    IlluminatedPair pair = illum_transform_pair(out.scene.canvas, references->references[idx]);
    out.image = std::move(pair.synthetic);
    out.reference = std::move(pair.real);
    out.reference_index = idx;
  }
  out.annotation = annotate_scene(out.scene, config.category, config.occlusion_export_max);
  return out;
}

std::unique_ptr<Scorer> make_scorer(const ScorerSpec& spec) {
  if (spec.kind == ScorerSpec::Kind::kHeuristic) return std::make_unique<HeuristicScorer>();
  return std::make_unique<ExternalScorer>(
      std::make_unique<ScorerClient>(open_scorer_channel(spec.target), spec.timeout));
}

ImageBuffer debug_overlay(const ImageBuffer& image, const SceneState& scene) {
  ImageBuffer out = image;
  for (std::size_t k = 0; k < scene.instances.size(); ++k) {
    const double hue = std::fmod(static_cast<double>(k) * 0.618033988749895, 1.0) * 6.0;
    const int sector = static_cast<int>(hue);
    const double f = hue - sector;
    const std::array<Rgba, 6> ramp{{{1, f, 0, 1}, {1 - f, 1, 0, 1}, {0, 1, f, 1},
                                     {0, 1 - f, 1, 1}, {f, 0, 1, 1}, {1, 0, 1 - f, 1}}};
    const Rgba tint = ramp[static_cast<std::size_t>(sector) % 6];
    const Bitmap& mask = scene.instances[k].visible_mask;
    for (int y = 0; y < mask.height(); ++y) {
      for (int x = 0; x < mask.width(); ++x) {
        if (!mask.get(x, y)) continue;
        const Rgba p = out.at(x, y);
        out.set(x, y, {0.5 * (p.r + tint.r), 0.5 * (p.g + tint.g), 0.5 * (p.b + tint.b), p.a});
      }
    }
  }
  return out;
}

std::vector<double> contact_ratios(const SceneState& scene, int contact_radius) {
  std::vector<double> out;
  Bitmap prior(scene.width(), scene.height());
  for (std::size_t k = 0; k < scene.instances.size(); ++k) {
    const Bitmap& full = scene.instances[k].full_mask;
    if (k > 0) out.push_back(contact_ratio(dilate(prior, contact_radius), full));
    auto bits = prior.bits();
    const auto fb = full.bits();
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] |= fb[i];
  }
  return out;
}

DatasetManifest generate_dataset(const SynthesisConfig& config, const std::filesystem::path& out_dir,
                                 const DatasetOptions& options) {
  config.validate();
  if (options.workers < 1) throw InvalidArgument("workers must be >= 1");
  const std::vector<Cutout> library = load_library(config.library_dir);
  const ReferencePool references = ReferencePool::load(config);

  const auto images_dir = out_dir / "images";
  const auto refs_dir = out_dir / "references";
  const auto overlay_dir = out_dir / "overlays";
  std::error_code ec;
  std::filesystem::create_directories(images_dir, ec);
  if (ec) throw IoError("cannot create " + images_dir.string() + ": " + ec.message());
  if (config.illumination.enabled) {
    std::filesystem::create_directories(refs_dir, ec);
    if (ec) throw IoError("cannot create " + refs_dir.string() + ": " + ec.message());
  }
  if (options.debug_overlay) {
    std::filesystem::create_directories(overlay_dir, ec);
    if (ec) throw IoError("cannot create " + overlay_dir.string() + ": " + ec.message());
  }

  struct Encoded {
    std::vector<std::uint8_t> image, reference, overlay;
    SceneAnnotation annotation;
  };
  const auto count = static_cast<std::size_t>(config.count);
  std::vector<std::optional<Encoded>> slots(count);
  std::mutex mu;
  std::condition_variable ready;
  std::exception_ptr failure;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};

  auto worker = [&] {
    try {
      std::unique_ptr<Scorer> scorer;
      if (config.placement == PlacementMode::kGuided) {
        scorer = options.scorer_factory ? options.scorer_factory() : make_scorer(config.scorer);
      }
      for (std::size_t i = next++; i < count && !stop; i = next++) {
        Rng rng(derive_seed(config.seed, i));
        GeneratedScene g = generate_scene(library, config, scorer.get(), &references, rng);
        Encoded e;
        e.image = encode_png(g.image, PngChannels::kRgb);
        if (g.reference) e.reference = encode_png(*g.reference, PngChannels::kRgb);
        if (options.debug_overlay) e.overlay = encode_png(debug_overlay(g.image, g.scene), PngChannels::kRgb);
        e.annotation = std::move(g.annotation);
        std::lock_guard lock(mu);
        slots[i] = std::move(e);
        ready.notify_all();
      }
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
      stop = true;
      ready.notify_all();
    }
  };
  std::vector<std::thread> threads;
  const int n_threads = static_cast<int>(std::min<std::size_t>(options.workers, std::max<std::size_t>(count, 1)));
  for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);

  DatasetManifest manifest;
  manifest.categories.push_back({1, config.category});
  std::int64_t annotation_id = 1;
  try {
    for (std::size_t i = 0; i < count; ++i) {
      Encoded e;
      {
        std::unique_lock lock(mu);
        ready.wait(lock, [&] { return slots[i].has_value() || failure; });
        if (!slots[i]) break;
        e = std::move(*slots[i]);
        slots[i].reset();
      }
      const std::string name = scene_file_name(i);
      write_bytes(images_dir / name, e.image);
      ImageRecord im{static_cast<std::int64_t>(i) + 1, name, config.canvas_width, config.canvas_height, std::nullopt};
      if (!e.reference.empty()) {
        write_bytes(refs_dir / name, e.reference);
        im.reference_image = "references/" + name;
      }
      if (!e.overlay.empty()) write_bytes(overlay_dir / name, e.overlay);
      manifest.images.push_back(std::move(im));
      for (const auto& a : e.annotation.instances) {
        manifest.annotations.push_back({annotation_id++, static_cast<std::int64_t>(i) + 1, 1, a.bbox, a.area,
                                        a.segmentation, a.occlusion_fraction, a.excluded});
      }
    }
  } catch (...) {
    stop = true;
    for (auto& t : threads) t.join();
    throw;
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  write_manifest(manifest, out_dir / "annotations.json");
  return manifest;
}

}  // namespace hocforge
