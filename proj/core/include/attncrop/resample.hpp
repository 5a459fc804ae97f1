#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "attncrop/raster.hpp"

namespace attncrop {

namespace detail {

// a + t * (b - a) returns a exactly when a == b, so constants survive resampling.
inline double lerp(double a, double b, double t) noexcept { return a + t * (b - a); }

inline Rgb lerp(const Rgb& a, const Rgb& b, double t) noexcept {
  return {lerp(a.r, b.r, t), lerp(a.g, b.g, t), lerp(a.b, b.b, t)};
}

struct Tap {
  int lo = 0;
  int hi = 0;
  double frac = 0.0;
};

// Pixel-centre alignment: destination centre d maps to source coordinate
// (d + 0.5) * src / dst - 0.5, clamped to the valid range.
inline std::vector<Tap> bilinear_taps(int src, int dst) {
  std::vector<Tap> taps(static_cast<std::size_t>(dst));
  const double scale = static_cast<double>(src) / static_cast<double>(dst);
  for (int d = 0; d < dst; ++d) {
    double x = (d + 0.5) * scale - 0.5;
    x = std::clamp(x, 0.0, static_cast<double>(src - 1));
    const int lo = static_cast<int>(std::floor(x));
    const int hi = std::min(lo + 1, src - 1);
    taps[static_cast<std::size_t>(d)] = {lo, hi, x - lo};
  }
  return taps;
}

}  // namespace detail

/// Bilinear resampling to exactly height x width; aspect ratio is not preserved.
template <typename T>
Raster<T> resize_bilinear(const Raster<T>& src, int height, int width) {
  if (src.empty()) throw InvalidInput("resize_bilinear: empty source raster");
  if (height <= 0 || width <= 0) throw InvalidInput("resize_bilinear: target dimensions must be positive");

  const auto row_taps = detail::bilinear_taps(src.height(), height);
  const auto col_taps = detail::bilinear_taps(src.width(), width);
  Raster<T> out(height, width);
  for (int r = 0; r < height; ++r) {
    const auto& ty = row_taps[static_cast<std::size_t>(r)];
    for (int c = 0; c < width; ++c) {
      const auto& tx = col_taps[static_cast<std::size_t>(c)];
      const T top = detail::lerp(src(ty.lo, tx.lo), src(ty.lo, tx.hi), tx.frac);
      const T bottom = detail::lerp(src(ty.hi, tx.lo), src(ty.hi, tx.hi), tx.frac);
      out(r, c) = detail::lerp(top, bottom, ty.frac);
    }
  }
  return out;
}

/// Nearest-neighbour resampling with the same pixel-centre alignment as resize_bilinear.
template <typename T>
Raster<T> resize_nearest(const Raster<T>& src, int height, int width) {
  if (src.empty()) throw InvalidInput("resize_nearest: empty source raster");
  if (height <= 0 || width <= 0) throw InvalidInput("resize_nearest: target dimensions must be positive");

  auto index = [](int d, int src_n, int dst_n) {
    const auto s = static_cast<long long>(2 * d + 1) * src_n / (2LL * dst_n);
    return static_cast<int>(std::min<long long>(s, src_n - 1));
  };
  std::vector<int> rows(static_cast<std::size_t>(height));
  std::vector<int> cols(static_cast<std::size_t>(width));
  for (int r = 0; r < height; ++r) rows[static_cast<std::size_t>(r)] = index(r, src.height(), height);
  for (int c = 0; c < width; ++c) cols[static_cast<std::size_t>(c)] = index(c, src.width(), width);

  Raster<T> out(height, width);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      out(r, c) = src(rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
  return out;
}

}  // namespace attncrop
