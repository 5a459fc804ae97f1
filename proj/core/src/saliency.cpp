#include "attncrop/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "attncrop/error.hpp"
#include "attncrop/resample.hpp"

namespace attncrop {

void ScaleSpaceConfig::validate() const {
  if (!(base_sigma > 0.0) || !std::isfinite(base_sigma)) throw InvalidConfig("base_sigma must be positive");
  if (num_scales && *num_scales < 1) throw InvalidConfig("num_scales must be positive");
  if (manual_scale_index && *manual_scale_index < 0) throw InvalidConfig("manual scale index must be >= 0");
  if (manual_sigma && (!(*manual_sigma > 0.0) || !std::isfinite(*manual_sigma)))
    throw InvalidConfig("manual sigma must be positive");
  if (manual_scale_index && manual_sigma) throw InvalidConfig("give a manual scale index or a manual sigma, not both");
  if (working_size < 16) throw InvalidConfig("working_size must be >= 16");
  if (histogram_bins < 2) throw InvalidConfig("histogram_bins must be >= 2");
  if (post_sigma < 0.0 || !std::isfinite(post_sigma)) throw InvalidConfig("post_sigma must be >= 0");
}

int ScaleSpaceConfig::resolved_num_scales() const {
  if (num_scales) return *num_scales;
  return static_cast<int>(std::floor(std::log2(static_cast<double>(working_size)))) + 1;
}

double ScaleSpaceConfig::ladder_sigma(int index) const { return std::ldexp(base_sigma, index); }

FeatureChannels extract_feature_channels(const Image& image, int working_size) {
  if (image.empty()) throw InvalidInput("extract_feature_channels: zero-dimension image");
  if (working_size <= 0) throw InvalidInput("extract_feature_channels: working_size must be positive");

  const Image small = resize_bilinear(image, working_size, working_size);
  FeatureChannels ch{Raster<double>(working_size, working_size), Raster<double>(working_size, working_size),
                     Raster<double>(working_size, working_size)};
  for (int y = 0; y < working_size; ++y) {
    for (int x = 0; x < working_size; ++x) {
      const auto [r, g, b] = small(y, x);
      const double red = r - (g + b) / 2.0;
      const double green = g - (r + b) / 2.0;
      const double blue = b - (r + g) / 2.0;
      const double yellow = (r + g) / 2.0 - std::abs(r - g) / 2.0 - b;
      ch.intensity(y, x) = (r + g + b) / 3.0;
      ch.rg_opponent(y, x) = red - green;
      ch.by_opponent(y, x) = blue - yellow;
    }
  }
  return ch;
}

Raster<Quaternion> quaternion_signal(const FeatureChannels& channels) {
  if (channels.intensity.empty()) throw InvalidInput("quaternion_signal: empty channels");
  if (!channels.intensity.same_shape(channels.rg_opponent) || !channels.intensity.same_shape(channels.by_opponent))
    throw InvalidInput("quaternion_signal: channel dimensions differ");
  Raster<Quaternion> q(channels.intensity.height(), channels.intensity.width());
  auto out = q.values();
  const auto i = channels.intensity.values();
  const auto rg = channels.rg_opponent.values();
  const auto by = channels.by_opponent.values();
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = {0.0, i[n], rg[n], by[n]};
  return q;
}

Raster<double> normalize_min_max(const Raster<double>& input) {
  Raster<double> out(input.height(), input.width(), 0.0);
  if (input.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(input.values().begin(), input.values().end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  // A range lost in round-off relative to the magnitude counts as constant.
  const double scale = std::max(std::abs(*hi_it), std::abs(lo));
  if (!(range > scale * 1e-12) || !std::isfinite(range)) return out;
  auto dst = out.values();
  const auto src = input.values();
  for (std::size_t n = 0; n < src.size(); ++n) dst[n] = std::clamp((src[n] - lo) / range, 0.0, 1.0);
  return out;
}

double histogram_entropy(std::span<const double> values, int bins) {
  if (bins < 2) throw InvalidInput("histogram_entropy: bins must be >= 2");
  if (values.empty()) return 0.0;
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    const double scaled = std::isfinite(v) ? v * bins : 0.0;
    const int bin = std::clamp(static_cast<int>(std::floor(scaled)), 0, bins - 1);
    ++counts[static_cast<std::size_t>(bin)];
  }
  const double n = static_cast<double>(values.size());
  double entropy = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    entropy -= p * std::log2(p);
  }
  return entropy;
}

SaliencyMap reconstruct_saliency(const Raster<double>& smoothed_amplitude, const Raster<Quaternion>& direction,
                                 double post_sigma, int histogram_bins) {
  if (smoothed_amplitude.empty()) throw InvalidInput("reconstruct_saliency: empty amplitude");
  if (!smoothed_amplitude.same_shape(direction))
    throw InvalidInput("reconstruct_saliency: amplitude and direction dimensions differ");

  const int h = smoothed_amplitude.height();
  const int w = smoothed_amplitude.width();
  QuaternionSpectrum combined{Raster<Quaternion>(h, w), {}, {}};
  auto coeffs = combined.coeffs.values();
  const auto amp = smoothed_amplitude.values();
  const auto dir = direction.values();
  for (std::size_t n = 0; n < coeffs.size(); ++n)
    coeffs[n] = {amp[n] * dir[n].w, amp[n] * dir[n].x, amp[n] * dir[n].y, amp[n] * dir[n].z};

  const Raster<Quaternion> signal = hft_inverse(combined);
  Raster<double> raw(h, w);
  auto dst = raw.values();
  const auto q = signal.values();
  for (std::size_t n = 0; n < dst.size(); ++n) dst[n] = q[n].norm_squared();

  SaliencyMap map;
  map.values = normalize_min_max(gaussian_blur_replicate(raw, post_sigma));
  map.entropy = histogram_entropy(map.values.values(), histogram_bins);
  return map;
}

ScaleSelection select_scale(std::span<const SaliencyMap> candidates, int histogram_bins) {
  if (candidates.empty()) throw InvalidInput("select_scale: no candidates");
  std::size_t best = 0;
  double best_entropy = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const double e = histogram_entropy(candidates[k].values.values(), histogram_bins);
    if (e < best_entropy) {
      best_entropy = e;
      best = k;
    }
  }
  ScaleSelection selection{best, candidates[best]};
  selection.map.entropy = best_entropy;
  return selection;
}

SaliencyMap compute_working_saliency(const Image& image, const ScaleSpaceConfig& config) {
  config.validate();
  const QuaternionSpectrum spectrum = hft_forward(extract_feature_channels(image, config.working_size));

  auto at_sigma = [&](double sigma, int index) {
    SaliencyMap map = reconstruct_saliency(smooth_amplitude(spectrum, sigma), spectrum.direction, config.post_sigma,
                                           config.histogram_bins);
    map.sigma = sigma;
    map.source_scale_index = index;
    return map;
  };

  if (config.manual_scale_index) {
    const int index = *config.manual_scale_index;
    return at_sigma(config.ladder_sigma(index), index);
  }
  if (config.manual_sigma) {
    const double sigma = *config.manual_sigma;
    const int index = std::max(0, static_cast<int>(std::lround(std::log2(sigma / config.base_sigma))));
    return at_sigma(sigma, index);
  }

  const int scales = config.resolved_num_scales();
  std::vector<SaliencyMap> candidates;
  candidates.reserve(static_cast<std::size_t>(scales));
  for (int k = 0; k < scales; ++k) candidates.push_back(at_sigma(config.ladder_sigma(k), k));
  return select_scale(candidates, config.histogram_bins).map;
}

SaliencyMap compute_saliency(const Image& image, const ScaleSpaceConfig& config) {
  SaliencyMap working = compute_working_saliency(image, config);
  SaliencyMap full = working;
  full.values = normalize_min_max(resize_bilinear(working.values, image.height(), image.width()));
  full.entropy = histogram_entropy(full.values.values(), config.histogram_bins);
  return full;
}

}  // namespace attncrop
