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
#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hocforge/color.hpp"
#include "hocforge/config.hpp"
#include "hocforge/error.hpp"
#include "hocforge/extraction.hpp"
#include "hocforge/manifest.hpp"
#include "hocforge/png_io.hpp"
#include "hocforge/scorer_client.hpp"
#include "hocforge/synthesis.hpp"

namespace fs = std::filesystem;
using namespace hocforge;

namespace {

int run_extract(const fs::path& frames, const fs::path& out, double lo, double hi, double border) {
  std::vector<fs::path> files;
  if (!fs::is_directory(frames)) throw IoError("frames directory " + frames.string() + " does not exist");
  for (const auto& e : fs::directory_iterator(frames)) {
    if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  fs::create_directories(out);
  int written = 0;
  for (const auto& f : files) {
    const ImageBuffer frame = read_png(f);
    try {
      const BackgroundModel bg = estimate_background(frame, border, lo, hi);
      const Cutout c = extract_cutout(frame, bg, f.stem().string());
      write_png(out / f.filename(), c.sprite, PngChannels::kRgba);
      ++written;
    } catch (const NoForeground& e) {
      std::cerr << "skip " << f.filename().string() << ": " << e.what() << "\n";
    }
  }
  std::cout << "extracted " << written << " of " << files.size() << " frames into " << out.string() << "\n";
  return written > 0 || files.empty() ? 0 : 1;
}

int run_synth(const fs::path& config_path, const fs::path& out, std::optional<int> count, int workers,
              bool overlay) {
  SynthesisConfig config = load_config(config_path);
  apply_seed_override(config);
  if (count) config.count = *count;
  config.validate();
  DatasetOptions options;
  options.workers = workers;
  options.debug_overlay = overlay;
  const DatasetManifest m = generate_dataset(config, out, options);
  const auto excluded = std::count_if(m.annotations.begin(), m.annotations.end(),
                                      [](const AnnotationRecord& a) { return a.excluded; });
  std::cout << "wrote " << m.images.size() << " images and " << m.annotations.size() << " annotations ("
            << excluded << " excluded) to " << out.string() << "\n";
  return 0;
}

int run_illum(const fs::path& image, const fs::path& reference, const fs::path& out,
              std::optional<double> sigma, std::optional<fs::path> reference_out) {
  const ImageBuffer syn = read_png(image);
  const ImageBuffer real = read_png(reference);
  const BlurSpec spec = sigma ? BlurSpec{*sigma} : BlurSpec::large_kernel_for(syn.width(), syn.height());
  if (!(spec.sigma > 0.0)) throw InvalidArgument("--sigma must be > 0");
  const IlluminatedPair pair = illum_transform_pair(syn, real, spec);
  write_png(out, pair.synthetic, PngChannels::kRgba);
  if (reference_out) write_png(*reference_out, pair.real, PngChannels::kRgba);
  return 0;
}

int run_validate(const fs::path& manifest_path, const fs::path& images, double occlusion_max) {
  const DatasetManifest m = read_manifest(manifest_path);
  const ValidationReport report = validate_manifest(m, images, occlusion_max);
  for (const auto& v : report.violations) std::cout << v.kind << ": " << v.message << "\n";
  std::cout << (report.ok() ? "ok" : "FAILED") << ": " << m.images.size() << " images, "
            << m.annotations.size() << " annotations, " << report.violations.size() << " violations\n";
  return report.ok() ? 0 : 1;
}

int run_score_probe(const std::string& target, const fs::path& png, int timeout_ms) {
  const ImageBuffer crop = read_png(png);
  ScorerClient client(open_scorer_channel(target), std::chrono::milliseconds(timeout_ms));
  const double s = client.score(crop);
  std::printf("%.6f\n", s);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hocforge: synthetic homogeneous-object-cluster images with instance masks"};
  app.require_subcommand(1);

  auto* extract = app.add_subcommand("extract", "cut single objects out of plain-background frames");
  fs::path frames, extract_out;
  double lo = 0.08, hi = 0.25, border = 0.05;
  extract->add_option("--frames", frames, "directory of frame PNGs")->required();
  extract->add_option("--out", extract_out, "output directory for cutout PNGs")->required();
  extract->add_option("--lo", lo, "distance below which a pixel is background")->capture_default_str();
  extract->add_option("--hi", hi, "distance above which a pixel is object")->capture_default_str();
  extract->add_option("--border", border, "border band fraction sampled for the background")->capture_default_str();

  auto* synth = app.add_subcommand("synth", "generate a dataset");
  fs::path config_path, synth_out;
  std::optional<int> count;
  int workers = 1;
  bool overlay = false;
  synth->add_option("--config", config_path, "JSON config")->required();
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--count", count, "number of scenes (overrides the config)");
  synth->add_option("--workers", workers, "parallel scene workers")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_flag("--debug-overlay", overlay, "also write images with tinted visible masks");

  auto* illum = app.add_subcommand("illum", "transfer a real image's illumination onto an image");
  fs::path illum_image, illum_ref, illum_out;
  std::optional<double> sigma;
  std::optional<fs::path> ref_out;
  illum->add_option("--image", illum_image, "synthetic image")->required();
  illum->add_option("--reference", illum_ref, "real reference image of the same size")->required();
  illum->add_option("--out", illum_out, "output PNG")->required();
  illum->add_option("--sigma", sigma, "blur sigma in pixels (default max(w,h)/8)");
  illum->add_option("--reference-out", ref_out, "also write the relit reference");

  auto* validate = app.add_subcommand("validate", "check a manifest against its images");
  fs::path manifest_path, images_dir;
  double occlusion_max = 0.8;
  validate->add_option("--manifest", manifest_path, "annotations.json")->required();
  validate->add_option("--images", images_dir, "directory holding the images")->required();
  validate->add_option("--occlusion-max", occlusion_max, "exclusion threshold")->capture_default_str();

  auto* probe = app.add_subcommand("score-probe", "score one PNG with an external scorer");
  std::string target;
  fs::path probe_png;
  int timeout_ms = 10000;
  probe->add_option("--scorer", target, "command line, or host:port")->required();
  probe->add_option("--png", probe_png, "image to score")->required();
  probe->add_option("--timeout-ms", timeout_ms, "response timeout")->capture_default_str()->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*extract) return run_extract(frames, extract_out, lo, hi, border);
    if (*synth) return run_synth(config_path, synth_out, count, workers, overlay);
    if (*illum) return run_illum(illum_image, illum_ref, illum_out, sigma, ref_out);
    if (*validate) return run_validate(manifest_path, images_dir, occlusion_max);
    if (*probe) return run_score_probe(target, probe_png, timeout_ms);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
