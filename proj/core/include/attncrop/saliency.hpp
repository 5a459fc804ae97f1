#pragma once

// Frequency-domain saliency: the colour image is packed into a pure
// quaternion signal, transformed with a hypercomplex Fourier transform,
// its amplitude spectrum is smoothed by Gaussians over a dyadic scale
// ladder, and each smoothed amplitude is recombined with the original
// phase direction and inverted. The scale whose map has the lowest
// histogram entropy wins.
//
// Normalisation convention: the forward transform is unnormalised and the
// inverse carries the 1/(H*W) factor, so a DC-only spectrum of value c
// inverts to the constant c/(H*W).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "attncrop/raster.hpp"

namespace attncrop {

/// q = w + x*i + y*j + z*k
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  [[nodiscard]] double norm_squared() const noexcept { return w * w + x * x + y * y + z * z; }
  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

struct FeatureChannels {
  Raster<double> intensity;
  Raster<double> rg_opponent;
  Raster<double> by_opponent;
};

struct QuaternionSpectrum {
  Raster<Quaternion> coeffs;
  /// |coeffs| per bin.
  Raster<double> amplitude;
  /// coeffs / |coeffs|, exactly zero where the amplitude is zero.
  Raster<Quaternion> direction;
};

struct SaliencyMap {
  Raster<double> values;
  int source_scale_index = 0;
  /// Amplitude smoothing sigma (frequency bins) that produced this map.
  double sigma = 0.0;
  /// Shannon entropy in bits of the histogram of `values`.
  double entropy = 0.0;
};

struct ScaleSpaceConfig {
  double base_sigma = 0.5;
  /// nullopt selects floor(log2(working_size)) + 1 scales.
  std::optional<int> num_scales;
  /// Skip entropy selection and use this ladder index.
  std::optional<int> manual_scale_index;
  /// Skip entropy selection and smooth with exactly this sigma.
  std::optional<double> manual_sigma;
  int working_size = 128;
  int histogram_bins = 256;
  /// Spatial Gaussian applied to the squared reconstruction, in working-size pixels.
  double post_sigma = 3.0;

  /// Throws InvalidConfig when a field is outside its domain.
  void validate() const;
  [[nodiscard]] int resolved_num_scales() const;
  /// sigma_k = 2^k * base_sigma for zero-based ladder index k.
  [[nodiscard]] double ladder_sigma(int index) const;
};

/// Downscales to working_size x working_size (bilinear) and builds the
/// intensity and the red-green / blue-yellow opponent channels.
FeatureChannels extract_feature_channels(const Image& image, int working_size);

/// Packs the channels as the pure quaternion I*i + RG*j + BY*k.
Raster<Quaternion> quaternion_signal(const FeatureChannels& channels);

/// Hypercomplex transform via the symplectic split q = (w + x i) + (y + z i) j:
/// both complex planes get an ordinary 2-D FFT.
QuaternionSpectrum hft_forward(const Raster<Quaternion>& signal);
QuaternionSpectrum hft_forward(const FeatureChannels& channels);

Raster<Quaternion> hft_inverse(const QuaternionSpectrum& spectrum);

/// Circular (wrap-around) convolution with a unit-sum Gaussian.
Raster<double> gaussian_blur_circular(const Raster<double>& input, double sigma);

/// Convolution with a unit-sum Gaussian, edge pixels replicated. sigma <= 0 is a no-op.
Raster<double> gaussian_blur_replicate(const Raster<double>& input, double sigma);

Raster<double> smooth_amplitude(const QuaternionSpectrum& spectrum, double sigma);

/// Min-max normalisation to [0, 1]; a constant raster becomes all zeros.
Raster<double> normalize_min_max(const Raster<double>& input);

/// Base-2 Shannon entropy of a `bins`-bin histogram over [0, 1]; empty bins are skipped.
double histogram_entropy(std::span<const double> values, int bins = 256);

SaliencyMap reconstruct_saliency(const Raster<double>& smoothed_amplitude,
                                 const Raster<Quaternion>& direction, double post_sigma,
                                 int histogram_bins = 256);

struct ScaleSelection {
  std::size_t index = 0;
  SaliencyMap map;
};

/// Lowest-entropy candidate; ties go to the lowest index. Entropy is
/// recomputed from the values with `histogram_bins` bins.
ScaleSelection select_scale(std::span<const SaliencyMap> candidates, int histogram_bins = 256);

/// Full pipeline at working resolution (working_size x working_size).
SaliencyMap compute_working_saliency(const Image& image, const ScaleSpaceConfig& config);

/// Full pipeline, map resampled to the image's own dimensions.
SaliencyMap compute_saliency(const Image& image, const ScaleSpaceConfig& config);

}  // namespace attncrop
