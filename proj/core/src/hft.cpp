#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "attncrop/error.hpp"
#include "attncrop/saliency.hpp"
#include "fft.hpp"

namespace attncrop {

namespace {

// Bins whose norm is below this fraction of the spectrum's peak norm are
// round-off and are flushed to exact zero, so the direction field is
// well-defined (and zero) there.
constexpr double kFlushRelative = 1e-12;

void check_signal(const Raster<Quaternion>& signal) {
  if (signal.empty()) throw InvalidInput("hft: empty signal");
}

}  // namespace

QuaternionSpectrum hft_forward(const Raster<Quaternion>& signal) {
  check_signal(signal);
  const int h = signal.height();
  const int w = signal.width();

  detail::FftBuffer simplex(h, w);
  detail::FftBuffer perplex(h, w);
  {
    auto a = simplex.data();
    auto b = perplex.data();
    const auto q = signal.values();
    for (std::size_t i = 0; i < q.size(); ++i) {
      a[i] = {q[i].w, q[i].x};
      b[i] = {q[i].y, q[i].z};
    }
  }
  simplex.forward();
  perplex.forward();

  QuaternionSpectrum spectrum{Raster<Quaternion>(h, w), Raster<double>(h, w),
                              Raster<Quaternion>(h, w)};
  auto coeffs = spectrum.coeffs.values();
  auto amplitude = spectrum.amplitude.values();
  auto direction = spectrum.direction.values();
  const auto a = simplex.data();
  const auto b = perplex.data();

  double peak = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    coeffs[i] = {a[i].real(), a[i].imag(), b[i].real(), b[i].imag()};
    amplitude[i] = std::sqrt(coeffs[i].norm_squared());
    peak = std::max(peak, amplitude[i]);
  }
  const double cutoff = peak * kFlushRelative;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (amplitude[i] <= cutoff) {
      coeffs[i] = {};
      amplitude[i] = 0.0;
      direction[i] = {};
      continue;
    }
    const double inv = 1.0 / amplitude[i];
    direction[i] = {coeffs[i].w * inv, coeffs[i].x * inv, coeffs[i].y * inv, coeffs[i].z * inv};
  }
  return spectrum;
}

QuaternionSpectrum hft_forward(const FeatureChannels& channels) {
  return hft_forward(quaternion_signal(channels));
}

Raster<Quaternion> hft_inverse(const QuaternionSpectrum& spectrum) {
  const auto& coeffs = spectrum.coeffs;
  if (coeffs.empty()) throw InvalidInput("hft_inverse: empty spectrum");
  if ((!spectrum.amplitude.empty() && !spectrum.amplitude.same_shape(coeffs)) ||
      (!spectrum.direction.empty() && !spectrum.direction.same_shape(coeffs)))
    throw InvalidInput("hft_inverse: spectrum fields have mismatched dimensions");

  const int h = coeffs.height();
  const int w = coeffs.width();
  detail::FftBuffer simplex(h, w);
  detail::FftBuffer perplex(h, w);
  {
    auto a = simplex.data();
    auto b = perplex.data();
    const auto q = coeffs.values();
    for (std::size_t i = 0; i < q.size(); ++i) {
      a[i] = {q[i].w, q[i].x};
      b[i] = {q[i].y, q[i].z};
    }
  }
  simplex.inverse();
  perplex.inverse();

  Raster<Quaternion> out(h, w);
  auto q = out.values();
  const auto a = simplex.data();
  const auto b = perplex.data();
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = {a[i].real(), a[i].imag(), b[i].real(), b[i].imag()};
  return out;
}

namespace {

// Gaussian taps at offsets -radius..radius, unnormalised.
std::vector<double> gaussian_taps(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  const double denom = 2.0 * sigma * sigma;
  for (int d = -radius; d <= radius; ++d)
    taps[static_cast<std::size_t>(d + radius)] = std::exp(-static_cast<double>(d) * d / denom);
  return taps;
}

// Kernel folded onto a period of length n, normalised to unit sum.
struct PeriodicKernel {
  std::vector<int> offsets;
  std::vector<double> weights;
};

PeriodicKernel periodic_kernel(double sigma, int n) {
  const auto taps = gaussian_taps(sigma);
  const int radius = static_cast<int>(taps.size() / 2);
  std::vector<double> folded(static_cast<std::size_t>(n), 0.0);
  for (int d = -radius; d <= radius; ++d) {
    const int m = ((d % n) + n) % n;
    folded[static_cast<std::size_t>(m)] += taps[static_cast<std::size_t>(d + radius)];
  }
  double total = 0.0;
  for (double v : folded) total += v;
  PeriodicKernel kernel;
  for (int m = 0; m < n; ++m) {
    const double v = folded[static_cast<std::size_t>(m)] / total;
    if (v == 0.0) continue;
    kernel.offsets.push_back(m);
    kernel.weights.push_back(v);
  }
  return kernel;
}

}  // namespace

Raster<double> gaussian_blur_circular(const Raster<double>& input, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("gaussian_blur_circular: sigma must be positive");
  if (input.empty()) return input;
  const int h = input.height();
  const int w = input.width();

  const auto row_kernel = periodic_kernel(sigma, w);
  Raster<double> tmp(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (std::size_t t = 0; t < row_kernel.offsets.size(); ++t) {
        int src = c - row_kernel.offsets[t];
        if (src < 0) src += w;
        acc += row_kernel.weights[t] * input(r, src);
      }
      tmp(r, c) = acc;
    }
  }

  const auto col_kernel = periodic_kernel(sigma, h);
  Raster<double> out(h, w);
  std::vector<double> column(static_cast<std::size_t>(h));
  for (int c = 0; c < w; ++c) {
    for (int r = 0; r < h; ++r) column[static_cast<std::size_t>(r)] = tmp(r, c);
    for (int r = 0; r < h; ++r) {
      double acc = 0.0;
      for (std::size_t t = 0; t < col_kernel.offsets.size(); ++t) {
        int src = r - col_kernel.offsets[t];
        if (src < 0) src += h;
        acc += col_kernel.weights[t] * column[static_cast<std::size_t>(src)];
      }
      out(r, c) = acc;
    }
  }
  return out;
}

Raster<double> gaussian_blur_replicate(const Raster<double>& input, double sigma) {
  if (!(sigma > 0.0) || input.empty()) return input;
  auto taps = gaussian_taps(sigma);
  double total = 0.0;
  for (double v : taps) total += v;
  for (double& v : taps) v /= total;
  const int radius = static_cast<int>(taps.size() / 2);
  const int h = input.height();
  const int w = input.width();

  Raster<double> tmp(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int d = -radius; d <= radius; ++d)
        acc += taps[static_cast<std::size_t>(d + radius)] * input(r, std::clamp(c + d, 0, w - 1));
      tmp(r, c) = acc;
    }
  }
  Raster<double> out(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int d = -radius; d <= radius; ++d)
        acc += taps[static_cast<std::size_t>(d + radius)] * tmp(std::clamp(r + d, 0, h - 1), c);
      out(r, c) = acc;
    }
  }
  return out;
}

Raster<double> smooth_amplitude(const QuaternionSpectrum& spectrum, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("smooth_amplitude: sigma must be positive");
  if (spectrum.amplitude.empty()) throw InvalidInput("smooth_amplitude: empty spectrum");
  return gaussian_blur_circular(spectrum.amplitude, sigma);
}

}  // namespace attncrop
