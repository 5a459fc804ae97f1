#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "attncrop/crop.hpp"

namespace attncrop {

inline constexpr const char* kManifestSchemaVersion = "1";

struct ManifestOutput {
  /// "ac" for the attention-cropped image, "orig" for the passthrough copy,
  /// "saliency" / "labels" for debug rasters.
  std::string variant;
  /// Relative to the run's output directory, '/'-separated.
  std::string path;

  friend bool operator==(const ManifestOutput&, const ManifestOutput&) = default;
};

/// One line of the JSON-lines manifest: everything needed to reproduce the
/// emitted files from the source image.
struct ManifestRecord {
  /// Relative to the run's input directory, '/'-separated.
  std::string source_path;
  std::vector<ManifestOutput> outputs;
  /// Class name taken from the parent directory.
  std::optional<std::string> label;
  CropBox box;
  double th = 0.0;
  int scale_index = 0;
  double sigma = 0.0;
  double entropy = 0.0;
  int clusters_found = 0;
  bool fallback = false;
  bool degenerate = false;
  int source_width = 0;
  int source_height = 0;
  std::uint64_t seed = 0;
  /// Only recorded on request: wall time differs between runs.
  std::optional<double> elapsed_ms;

  friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

std::string to_json_line(const ManifestRecord& record);
/// Throws InvalidInput on malformed JSON, missing fields or an unknown schema version.
ManifestRecord parse_json_line(const std::string& line);

/// Sorts by source_path and writes one record per line through a temporary
/// file renamed over `path`, so readers never observe a partial manifest.
void write_manifest(std::vector<ManifestRecord> records, const std::filesystem::path& path);

std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path);

}  // namespace attncrop
