#pragma once

#include <optional>

#include "attncrop/kmeans.hpp"
#include "attncrop/raster.hpp"
#include "attncrop/saliency.hpp"

namespace attncrop {

struct TargetSize {
  int width = 0;
  int height = 0;

  friend bool operator==(const TargetSize&, const TargetSize&) = default;
};

struct ACConfig {
  int cluster_count = 3;
  /// Fraction of the clusters to crop away; th = cluster_count * lambda.
  double lambda = 1.0 / 3.0;
  std::optional<TargetSize> target_size;
  /// Boxes smaller than this fraction of the image area fall back to the full image.
  double min_box_fraction = 0.0;
  KMeansOptions kmeans;

  void validate() const;
};

/// Inclusive pixel bounds.
struct CropBox {
  int row_start = 0;
  int col_start = 0;
  int row_end = 0;
  int col_end = 0;

  [[nodiscard]] int height() const noexcept { return row_end - row_start + 1; }
  [[nodiscard]] int width() const noexcept { return col_end - col_start + 1; }
  [[nodiscard]] long long area() const noexcept { return static_cast<long long>(height()) * width(); }
  [[nodiscard]] bool contains(const CropBox& inner) const noexcept {
    return row_start <= inner.row_start && col_start <= inner.col_start && inner.row_end <= row_end &&
           inner.col_end <= col_end;
  }
  static CropBox full(int height, int width) noexcept { return {0, 0, height - 1, width - 1}; }

  friend bool operator==(const CropBox&, const CropBox&) = default;
};

/// th = n * lambda, unrounded. Throws InvalidConfig unless n >= 2 and 0 <= lambda < 1.
double threshold(int cluster_count, double lambda);

/// Bounding box of every pixel whose label is strictly greater than th.
/// Throws EmptySelection when no pixel qualifies.
CropBox crop_box(const LabelRaster& labels, double th);

Image apply_crop(const Image& image, const CropBox& box);

/// Bilinear resampling to exactly size.width x size.height.
Image resize_to_target(const Image& image, TargetSize size);

struct ACRecord {
  CropBox box;
  double th = 0.0;
  int scale_index = 0;
  double sigma = 0.0;
  /// Entropy of the selected working-resolution saliency map.
  double entropy = 0.0;
  int clusters_found = 0;
  bool fallback = false;
  bool degenerate = false;
  int source_height = 0;
  int source_width = 0;
  double elapsed_ms = 0.0;
};

struct ACResult {
  Image image;
  ACRecord record;
};

/// Intermediates kept for inspection, at the source image's resolution.
struct ACTrace {
  Image image;
  ACRecord record;
  SaliencyMap saliency;
  LabelRaster labels;
};

/// saliency -> k-means -> rank labels -> crop box -> crop -> optional resize.
/// An empty selection or a box below min_box_fraction yields the uncropped
/// image with record.fallback set; only invalid inputs or configs throw.
ACResult attention_crop(const Image& image, const ScaleSpaceConfig& saliency_config, const ACConfig& ac_config);

ACTrace attention_crop_traced(const Image& image, const ScaleSpaceConfig& saliency_config,
                              const ACConfig& ac_config);

}  // namespace attncrop
