#include "attncrop/crop.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "attncrop/error.hpp"
#include "attncrop/resample.hpp"

namespace attncrop {

void ACConfig::validate() const {
  (void)threshold(cluster_count, lambda);
  if (target_size && (target_size->width <= 0 || target_size->height <= 0))
    throw InvalidConfig("target size must be positive");
  if (!(min_box_fraction >= 0.0 && min_box_fraction <= 1.0)) throw InvalidConfig("min_box_fraction must be in [0, 1]");
}

double threshold(int cluster_count, double lambda) {
  if (cluster_count < 2) throw InvalidConfig("cluster count must be >= 2");
  if (!(lambda >= 0.0 && lambda < 1.0)) throw InvalidConfig("lambda must be in [0, 1)");
  return cluster_count * lambda;
}

CropBox crop_box(const LabelRaster& labels, double th) {
  const auto& raster = labels.labels;
  if (raster.empty()) throw InvalidInput("crop_box: empty label raster");
  int row_min = std::numeric_limits<int>::max();
  int col_min = std::numeric_limits<int>::max();
  int row_max = -1;
  int col_max = -1;
  for (int r = 0; r < raster.height(); ++r) {
    for (int c = 0; c < raster.width(); ++c) {
      if (!(raster(r, c) > th)) continue;
      row_min = std::min(row_min, r);
      row_max = std::max(row_max, r);
      col_min = std::min(col_min, c);
      col_max = std::max(col_max, c);
    }
  }
  if (row_max < 0) throw EmptySelection("crop_box: no label exceeds th = " + std::to_string(th));
  return {row_min, col_min, row_max, col_max};
}

Image apply_crop(const Image& image, const CropBox& box) {
  if (image.empty()) throw InvalidInput("apply_crop: empty image");
  if (box.row_start < 0 || box.col_start < 0 || box.row_start > box.row_end || box.col_start > box.col_end ||
      box.row_end >= image.height() || box.col_end >= image.width())
    throw InvalidInput("apply_crop: box outside the image");
  Image out(box.height(), box.width());
  for (int r = 0; r < out.height(); ++r)
    for (int c = 0; c < out.width(); ++c) out(r, c) = image(box.row_start + r, box.col_start + c);
  return out;
}

Image resize_to_target(const Image& image, TargetSize size) {
  if (size.width <= 0 || size.height <= 0) throw InvalidInput("resize_to_target: zero target dimension");
  return resize_bilinear(image, size.height, size.width);
}

namespace {

ACTrace run(const Image& image, const ScaleSpaceConfig& saliency_config, const ACConfig& ac_config,
            bool keep_intermediates) {
  const auto started = std::chrono::steady_clock::now();
  if (image.empty()) throw InvalidInput("attention_crop: empty image");
  saliency_config.validate();
  ac_config.validate();

  const SaliencyMap working = compute_working_saliency(image, saliency_config);
  const ClusterModel model = kmeans_1d(working.values.values(), ac_config.cluster_count, ac_config.kmeans);
  const LabelRaster working_labels = rank_labels(model, working.values.height(), working.values.width());

  LabelRaster labels{resize_nearest(working_labels.labels, image.height(), image.width()),
                     working_labels.cluster_count, working_labels.degenerate};

  ACTrace trace;
  auto& record = trace.record;
  record.th = threshold(ac_config.cluster_count, ac_config.lambda);
  record.scale_index = working.source_scale_index;
  record.sigma = working.sigma;
  record.entropy = working.entropy;
  record.clusters_found = labels.cluster_count;
  record.degenerate = labels.degenerate;
  record.source_height = image.height();
  record.source_width = image.width();

  const CropBox full = CropBox::full(image.height(), image.width());
  try {
    record.box = crop_box(labels, record.th);
    const double min_area = ac_config.min_box_fraction * static_cast<double>(full.area());
    if (static_cast<double>(record.box.area()) < min_area) {
      record.box = full;
      record.fallback = true;
    }
  } catch (const EmptySelection&) {
    record.box = full;
    record.fallback = true;
  }

  trace.image = record.box == full ? image : apply_crop(image, record.box);
  if (ac_config.target_size) trace.image = resize_to_target(trace.image, *ac_config.target_size);

  if (keep_intermediates) {
    trace.saliency = working;
    trace.saliency.values = normalize_min_max(resize_bilinear(working.values, image.height(), image.width()));
    trace.saliency.entropy = histogram_entropy(trace.saliency.values.values(), saliency_config.histogram_bins);
    trace.labels = std::move(labels);
  }
  record.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return trace;
}

}  // namespace

ACResult attention_crop(const Image& image, const ScaleSpaceConfig& saliency_config, const ACConfig& ac_config) {
  ACTrace trace = run(image, saliency_config, ac_config, false);
  return {std::move(trace.image), trace.record};
}

ACTrace attention_crop_traced(const Image& image, const ScaleSpaceConfig& saliency_config,
                              const ACConfig& ac_config) {
  return run(image, saliency_config, ac_config, true);
}

}  // namespace attncrop
