#include "attncrop/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

// jpeglib.h needs FILE and size_t declared first.
#include <jpeglib.h>

#include "attncrop/error.hpp"

namespace attncrop {

namespace {

using FilePtr = std::unique_ptr<std::FILE, decltype(&std::fclose)>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr file(std::fopen(path.c_str(), mode), &std::fclose);
  if (!file) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  return file;
}

std::uint8_t to_u8(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

Image from_rgb8(const std::vector<std::uint8_t>& pixels, int height, int width) {
  Image image(height, width);
  auto dst = image.values();
  for (std::size_t i = 0; i < dst.size(); ++i)
    dst[i] = {pixels[3 * i] / 255.0, pixels[3 * i + 1] / 255.0, pixels[3 * i + 2] / 255.0};
  return image;
}

std::vector<std::uint8_t> to_rgb8(const Image& image) {
  std::vector<std::uint8_t> pixels(image.size() * 3);
  const auto src = image.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    pixels[3 * i] = to_u8(src[i].r);
    pixels[3 * i + 1] = to_u8(src[i].g);
    pixels[3 * i + 2] = to_u8(src[i].b);
  }
  return pixels;
}

// ---- PNG (libpng simplified API) ----

DecodedImage read_png(const std::filesystem::path& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str()))
    throw IoError("png decode failed for " + path.string() + ": " + png.message);
  png.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, pixels.data(), 0, nullptr)) {
    const std::string message = png.message;
    png_image_free(&png);
    throw IoError("png decode failed for " + path.string() + ": " + message);
  }
  if (png.width == 0 || png.height == 0) throw IoError("png has zero dimensions: " + path.string());
  return {from_rgb8(pixels, static_cast<int>(png.height), static_cast<int>(png.width)), ImageFormat::kPng};
}

void write_png_buffer(const std::filesystem::path& path, int height, int width, png_uint_32 format,
                      const void* pixels, const void* colormap, int colormap_entries) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(width);
  png.height = static_cast<png_uint_32>(height);
  png.format = format;
  png.colormap_entries = static_cast<png_uint_32>(colormap_entries);
  if (!png_image_write_to_file(&png, path.c_str(), 0, pixels, 0, colormap))
    throw IoError("png encode failed for " + path.string() + ": " + png.message);
}

// ---- JPEG (libjpeg) ----

struct JpegError {
  jpeg_error_mgr mgr{};
  std::jmp_buf jump{};
  char message[JMSG_LENGTH_MAX] = {};
};

void on_jpeg_error(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegError*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void on_jpeg_message(j_common_ptr, int) {}

// Everything that must outlive setjmp lives outside the function doing the jump.
struct JpegReadState {
  jpeg_decompress_struct cinfo{};
  JpegError error;
  std::vector<std::uint8_t> pixels;
  int height = 0;
  int width = 0;
};

bool decode_jpeg(JpegReadState& s, std::FILE* file) {
  s.cinfo.err = jpeg_std_error(&s.error.mgr);
  s.error.mgr.error_exit = on_jpeg_error;
  s.error.mgr.emit_message = on_jpeg_message;
  if (setjmp(s.error.jump)) {
    jpeg_destroy_decompress(&s.cinfo);
    return false;
  }
  jpeg_create_decompress(&s.cinfo);
  jpeg_stdio_src(&s.cinfo, file);
  jpeg_read_header(&s.cinfo, TRUE);
  s.cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&s.cinfo);
  s.height = static_cast<int>(s.cinfo.output_height);
  s.width = static_cast<int>(s.cinfo.output_width);
  s.pixels.resize(static_cast<std::size_t>(s.height) * s.width * 3);
  while (s.cinfo.output_scanline < s.cinfo.output_height) {
    JSAMPROW row = s.pixels.data() + static_cast<std::size_t>(s.cinfo.output_scanline) * s.width * 3;
    jpeg_read_scanlines(&s.cinfo, &row, 1);
  }
  jpeg_finish_decompress(&s.cinfo);
  jpeg_destroy_decompress(&s.cinfo);
  return true;
}

DecodedImage read_jpeg(const std::filesystem::path& path) {
  auto file = open_file(path, "rb");
  JpegReadState state;
  if (!decode_jpeg(state, file.get()))
    throw IoError("jpeg decode failed for " + path.string() + ": " + state.error.message);
  if (state.height == 0 || state.width == 0) throw IoError("jpeg has zero dimensions: " + path.string());
  return {from_rgb8(state.pixels, state.height, state.width), ImageFormat::kJpeg};
}

struct JpegWriteState {
  jpeg_compress_struct cinfo{};
  JpegError error;
};

bool encode_jpeg(JpegWriteState& s, std::FILE* file, const std::vector<std::uint8_t>& pixels, int height, int width,
                 int quality) {
  s.cinfo.err = jpeg_std_error(&s.error.mgr);
  s.error.mgr.error_exit = on_jpeg_error;
  s.error.mgr.emit_message = on_jpeg_message;
  if (setjmp(s.error.jump)) {
    jpeg_destroy_compress(&s.cinfo);
    return false;
  }
  jpeg_create_compress(&s.cinfo);
  jpeg_stdio_dest(&s.cinfo, file);
  s.cinfo.image_width = static_cast<JDIMENSION>(width);
  s.cinfo.image_height = static_cast<JDIMENSION>(height);
  s.cinfo.input_components = 3;
  s.cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&s.cinfo);
  jpeg_set_quality(&s.cinfo, quality, TRUE);
  jpeg_start_compress(&s.cinfo, TRUE);
  while (s.cinfo.next_scanline < s.cinfo.image_height) {
    auto* row = const_cast<JSAMPLE*>(pixels.data() + static_cast<std::size_t>(s.cinfo.next_scanline) * width * 3);
    jpeg_write_scanlines(&s.cinfo, &row, 1);
  }
  jpeg_finish_compress(&s.cinfo);
  jpeg_destroy_compress(&s.cinfo);
  return true;
}

void write_jpeg(const std::filesystem::path& path, const Image& image, int quality) {
  const auto pixels = to_rgb8(image);
  auto file = open_file(path, "wb");
  JpegWriteState state;
  if (!encode_jpeg(state, file.get(), pixels, image.height(), image.width(), quality))
    throw IoError("jpeg encode failed for " + path.string() + ": " + state.error.message);
  if (std::fflush(file.get()) != 0) throw IoError("write failed for " + path.string());
}

}  // namespace

DecodedImage read_image(const std::filesystem::path& path) {
  std::array<unsigned char, 8> magic{};
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    in.read(reinterpret_cast<char*>(magic.data()), magic.size());
    if (in.gcount() < 3) throw IoError("file too short to be an image: " + path.string());
  }
  if (png_sig_cmp(magic.data(), 0, magic.size()) == 0) return read_png(path);
  if (magic[0] == 0xFF && magic[1] == 0xD8 && magic[2] == 0xFF) return read_jpeg(path);
  throw IoError("unrecognised image format: " + path.string());
}

void write_image(const std::filesystem::path& path, const Image& image, ImageFormat format, int jpeg_quality) {
  if (image.empty()) throw InvalidInput("write_image: empty image");
  if (format == ImageFormat::kJpeg) {
    write_jpeg(path, image, jpeg_quality);
    return;
  }
  const auto pixels = to_rgb8(image);
  write_png_buffer(path, image.height(), image.width(), PNG_FORMAT_RGB, pixels.data(), nullptr, 0);
}

void write_gray_png(const std::filesystem::path& path, const Raster<double>& values) {
  if (values.empty()) throw InvalidInput("write_gray_png: empty raster");
  std::vector<std::uint8_t> pixels(values.size());
  std::transform(values.values().begin(), values.values().end(), pixels.begin(), to_u8);
  write_png_buffer(path, values.height(), values.width(), PNG_FORMAT_GRAY, pixels.data(), nullptr, 0);
}

void write_label_png(const std::filesystem::path& path, const LabelRaster& labels) {
  const auto& raster = labels.labels;
  if (raster.empty()) throw InvalidInput("write_label_png: empty raster");
  const int n = labels.cluster_count;
  if (n < 1 || n > 255) throw InvalidInput("write_label_png: cluster count must be in 1..255");

  // Index 0 is reserved (black) for out-of-range labels; rank r uses index r.
  // Ranks run from blue (low saliency) through green to red (high saliency).
  std::vector<std::uint8_t> colormap(static_cast<std::size_t>(n + 1) * 3, 0);
  for (int r = 1; r <= n; ++r) {
    const double t = n == 1 ? 1.0 : static_cast<double>(r - 1) / (n - 1);
    const auto i = static_cast<std::size_t>(r) * 3;
    colormap[i] = to_u8(std::clamp(2.0 * t - 1.0, 0.0, 1.0));
    colormap[i + 1] = to_u8(1.0 - std::abs(2.0 * t - 1.0));
    colormap[i + 2] = to_u8(std::clamp(1.0 - 2.0 * t, 0.0, 1.0));
  }
  std::vector<std::uint8_t> pixels(raster.size());
  const auto src = raster.values();
  for (std::size_t i = 0; i < pixels.size(); ++i)
    pixels[i] = static_cast<std::uint8_t>(src[i] >= 1 && src[i] <= n ? src[i] : 0);
  write_png_buffer(path, raster.height(), raster.width(), PNG_FORMAT_RGB_COLORMAP, pixels.data(), colormap.data(),
                   n + 1);
}

}  // namespace attncrop
