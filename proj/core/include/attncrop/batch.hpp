#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "attncrop/crop.hpp"
#include "attncrop/saliency.hpp"

namespace attncrop {

enum class RunMode {
  /// Attention-cropped image only.
  kCrop,
  /// Passthrough copy (".orig") plus the attention-cropped variant (".ac").
  kAugment,
  /// Crop output plus saliency and label rasters as PNG.
  kSaliencyDebug,
};

std::string_view to_string(RunMode mode);
/// Accepts "crop", "augment" and "saliency-debug".
std::optional<RunMode> parse_run_mode(std::string_view text);

struct JobConfig {
  std::filesystem::path input_dir;
  std::filesystem::path output_dir;
  RunMode mode = RunMode::kCrop;
  ACConfig ac;
  ScaleSpaceConfig saliency;
  int workers = 1;
  std::uint64_t global_seed = 0;
  /// Defaults to <output_dir>/manifest.jsonl.
  std::optional<std::filesystem::path> manifest_path;
  /// Lower-case, with the leading dot.
  std::vector<std::string> image_extensions = {".png", ".jpg", ".jpeg"};
  /// Record the parent directory name as the class label.
  bool class_labels = true;
  /// Add elapsed_ms to manifest records. Makes manifests differ run to run.
  bool record_timing = false;
  int jpeg_quality = 95;

  [[nodiscard]] std::filesystem::path resolved_manifest_path() const;
};

struct ImageFailure {
  std::string source_path;
  std::string message;
};

struct RunSummary {
  std::size_t discovered = 0;
  std::size_t processed = 0;
  std::size_t failed = 0;
  std::size_t fallbacks = 0;
  std::vector<ImageFailure> failures;
  /// Non-fatal problems on images that were otherwise processed (debug artifacts).
  std::vector<ImageFailure> warnings;
  double total_seconds = 0.0;
  double images_per_second = 0.0;
  std::filesystem::path manifest_path;
};

/// Files under `root` whose extension (case-insensitive) is listed, as
/// '/'-separated paths relative to `root`, sorted.
std::vector<std::string> discover_images(const std::filesystem::path& root,
                                         const std::vector<std::string>& extensions);

/// Per-image seed from the relative path and the global seed (FNV-1a, then a
/// splitmix64 finaliser). Independent of scheduling.
std::uint64_t image_seed(std::string_view relative_path, std::uint64_t global_seed);

struct DebugArtifacts {
  std::filesystem::path saliency_png;
  std::filesystem::path labels_png;
};

/// Writes <prefix>.saliency.png and <prefix>.labels.png.
DebugArtifacts emit_debug_artifacts(const SaliencyMap& saliency, const LabelRaster& labels,
                                    const std::filesystem::path& out_prefix);

/// Processes every matching image under input_dir exactly once, in parallel.
/// Outputs and the manifest depend only on (corpus, config, global_seed).
/// Throws IoError / InvalidConfig for fatal problems; per-image failures are
/// collected in the summary.
RunSummary run_batch(const JobConfig& config);

}  // namespace attncrop
