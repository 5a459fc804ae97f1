// attention-crop: batch saliency-driven cropping of an image tree.
//
//   attention-crop --input DIR --output DIR --mode crop|augment|saliency-debug
//                  --clusters N --lambda F --target-size WxH --workers N
//                  --seed N --manifest PATH [--manual-scale K] [--min-box-frac F]
//
// Exit status: 0 success, 1 fatal config/IO error, 2 finished with per-image failures.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <thread>

#include "attncrop/batch.hpp"
#include "attncrop/error.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;

// "0.25" or a fraction such as "1/3".
std::optional<double> parse_ratio(const std::string& text) {
  try {
    std::size_t used = 0;
    if (const auto slash = text.find('/'); slash != std::string::npos) {
      const double num = std::stod(text.substr(0, slash), &used);
      if (used != slash) return std::nullopt;
      const std::string rest = text.substr(slash + 1);
      const double den = std::stod(rest, &used);
      if (used != rest.size() || den == 0.0) return std::nullopt;
      return num / den;
    }
    const double v = std::stod(text, &used);
    if (used != text.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<attncrop::TargetSize> parse_size(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) return std::nullopt;
  try {
    std::size_t used_w = 0;
    std::size_t used_h = 0;
    const std::string w = text.substr(0, x);
    const std::string h = text.substr(x + 1);
    const int width = std::stoi(w, &used_w);
    const int height = std::stoi(h, &used_h);
    if (used_w != w.size() || used_h != h.size() || width <= 0 || height <= 0) return std::nullopt;
    return attncrop::TargetSize{width, height};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

nlohmann::json summary_json(const attncrop::RunSummary& s) {
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : s.failures) failures.push_back({{"source_path", f.source_path}, {"error", f.message}});
  nlohmann::json warnings = nlohmann::json::array();
  for (const auto& w : s.warnings) warnings.push_back({{"source_path", w.source_path}, {"error", w.message}});
  return {{"discovered", s.discovered},
          {"processed", s.processed},
          {"failed", s.failed},
          {"fallbacks", s.fallbacks},
          {"failures", failures},
          {"warnings", warnings},
          {"total_seconds", s.total_seconds},
          {"images_per_second", s.images_per_second},
          {"manifest", s.manifest_path.string()}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Saliency-driven attention cropping for image datasets"};

  std::string input;
  std::string output;
  std::string mode_text = "crop";
  int clusters = 3;
  std::string lambda_text = "1/3";
  std::string target_text;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::uint64_t seed = 0;
  std::string manifest;
  std::optional<int> manual_scale;
  std::optional<double> manual_sigma;
  double min_box_frac = 0.0;
  int working_size = 128;
  int jpeg_quality = 95;
  bool record_timing = false;
  bool no_class_labels = false;
  bool quiet = false;

  app.add_option("--input", input, "Input directory (searched recursively)")->required();
  app.add_option("--output", output, "Output directory; mirrors the input tree")->required();
  app.add_option("--mode", mode_text, "crop | augment | saliency-debug")
      ->check(CLI::IsMember({"crop", "augment", "saliency-debug"}));
  app.add_option("--clusters", clusters, "k-means cluster count N (>= 2)");
  app.add_option("--lambda", lambda_text, "Fraction of clusters cropped away, in [0, 1); accepts 1/3");
  app.add_option("--target-size", target_text, "Resize outputs to WxH, e.g. 224x224");
  app.add_option("--workers", workers, "Worker threads");
  app.add_option("--seed", seed, "Global seed");
  app.add_option("--manifest", manifest, "Manifest path (default <output>/manifest.jsonl)");
  app.add_option("--manual-scale", manual_scale, "Use this smoothing scale index instead of entropy selection");
  app.add_option("--manual-sigma", manual_sigma, "Use this amplitude smoothing sigma (frequency bins)");
  app.add_option("--min-box-frac", min_box_frac, "Fall back to the full image below this box/image area ratio");
  app.add_option("--working-size", working_size, "Square resolution the saliency map is computed at");
  app.add_option("--jpeg-quality", jpeg_quality, "Quality for JPEG outputs")->check(CLI::Range(1, 100));
  app.add_flag("--record-timing", record_timing, "Store per-image elapsed_ms in the manifest");
  app.add_flag("--no-class-labels", no_class_labels, "Do not record parent directory names as labels");
  app.add_flag("-q,--quiet", quiet, "Do not print the run summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFatal;
  }

  attncrop::JobConfig config;
  config.input_dir = input;
  config.output_dir = output;
  config.mode = *attncrop::parse_run_mode(mode_text);
  config.ac.cluster_count = clusters;
  const auto lambda = parse_ratio(lambda_text);
  if (!lambda) {
    std::cerr << "error: --lambda: cannot parse '" << lambda_text << "'\n";
    return kExitFatal;
  }
  config.ac.lambda = *lambda;
  if (!target_text.empty()) {
    config.ac.target_size = parse_size(target_text);
    if (!config.ac.target_size) {
      std::cerr << "error: --target-size: expected WxH, got '" << target_text << "'\n";
      return kExitFatal;
    }
  }
  config.ac.min_box_fraction = min_box_frac;
  config.saliency.manual_scale_index = manual_scale;
  config.saliency.manual_sigma = manual_sigma;
  config.saliency.working_size = working_size;
  config.workers = workers;
  config.global_seed = seed;
  if (!manifest.empty()) config.manifest_path = manifest;
  config.record_timing = record_timing;
  config.class_labels = !no_class_labels;
  config.jpeg_quality = jpeg_quality;

  try {
    const attncrop::RunSummary summary = attncrop::run_batch(config);
    if (!quiet) std::cout << summary_json(summary).dump(2) << '\n';
    for (const auto& f : summary.failures) std::cerr << "failed: " << f.source_path << ": " << f.message << '\n';
    return summary.failed > 0 ? kExitPartial : kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFatal;
  }
}
