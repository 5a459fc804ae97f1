#pragma once

#include <filesystem>

#include "attncrop/kmeans.hpp"
#include "attncrop/raster.hpp"

namespace attncrop {

enum class ImageFormat { kPng, kJpeg };

struct DecodedImage {
  Image image;
  ImageFormat format = ImageFormat::kPng;
};

/// Format sniffed from the file's magic bytes, not its extension.
/// Greyscale, palette and alpha inputs are converted to RGB.
DecodedImage read_image(const std::filesystem::path& path);

/// 8-bit RGB output; channel values are clamped to [0, 1] and rounded to 1/255.
void write_image(const std::filesystem::path& path, const Image& image, ImageFormat format, int jpeg_quality = 95);

/// 8-bit greyscale PNG, value v written as round(255 * v).
void write_gray_png(const std::filesystem::path& path, const Raster<double>& values);

/// Indexed-colour PNG with one palette entry per rank 1..cluster_count.
void write_label_png(const std::filesystem::path& path, const LabelRaster& labels);

}  // namespace attncrop
