#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "attncrop/error.hpp"
#include "attncrop/saliency.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

namespace attncrop {
namespace {

Raster<Quaternion> random_quaternions(int h, int w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Raster<Quaternion> q(h, w);
  for (auto& v : q.values()) v = {u(rng), u(rng), u(rng), u(rng)};
  return q;
}

double max_abs_diff(const Raster<Quaternion>& a, const Raster<Quaternion>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& p = a.values()[i];
    const auto& q = b.values()[i];
    worst = std::max({worst, std::abs(p.w - q.w), std::abs(p.x - q.x), std::abs(p.y - q.y), std::abs(p.z - q.z)});
  }
  return worst;
}

// ---- feature channels ----

TEST(FeatureChannels, GreyCancelsOpponents) {
  const auto ch = extract_feature_channels(Image(4, 4, Rgb{0.5, 0.5, 0.5}), 16);
  EXPECT_EQ(ch.intensity.height(), 16);
  EXPECT_EQ(ch.intensity.width(), 16);
  for (std::size_t i = 0; i < ch.intensity.size(); ++i) {
    EXPECT_DOUBLE_EQ(ch.intensity.values()[i], 0.5);
    EXPECT_EQ(ch.rg_opponent.values()[i], 0.0);
    EXPECT_EQ(ch.by_opponent.values()[i], 0.0);
  }
}

TEST(FeatureChannels, BlackIsAllZero) {
  const auto ch = extract_feature_channels(Image(10, 3, Rgb{}), 16);
  for (std::size_t i = 0; i < ch.intensity.size(); ++i) {
    EXPECT_EQ(ch.intensity.values()[i], 0.0);
    EXPECT_EQ(ch.rg_opponent.values()[i], 0.0);
    EXPECT_EQ(ch.by_opponent.values()[i], 0.0);
  }
}

TEST(FeatureChannels, PureRed) {
  const auto ch = extract_feature_channels(Image(2, 2, Rgb{1.0, 0.0, 0.0}), 16);
  EXPECT_DOUBLE_EQ(ch.intensity(3, 5), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(ch.rg_opponent(3, 5), 1.5);
  EXPECT_DOUBLE_EQ(ch.by_opponent(3, 5), -0.5);
}

TEST(FeatureChannels, GreyscaleInputsHaveNoOpponentSignal) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Image img(23, 31);
    for (auto& px : img.values()) {
      const double v = u(rng);
      px = {v, v, v};
    }
    const auto ch = extract_feature_channels(img, 32);
    for (std::size_t i = 0; i < ch.intensity.size(); ++i) {
      ASSERT_EQ(ch.rg_opponent.values()[i], 0.0);
      ASSERT_EQ(ch.by_opponent.values()[i], 0.0);
    }
  }
}

TEST(FeatureChannels, ZeroDimensionImageRejected) {
  EXPECT_THROW(extract_feature_channels(Image(), 16), InvalidInput);
  EXPECT_THROW(extract_feature_channels(Image(0, 5), 16), InvalidInput);
}

// ---- forward transform ----

TEST(HftForward, MatchesDirectQuaternionDft) {
  const auto q = random_quaternions(6, 8, 11);
  const auto spectrum = hft_forward(q);
  const auto oracle = testing::naive_quaternion_dft(q);
  EXPECT_LT(max_abs_diff(spectrum.coeffs, oracle), 1e-9);
}

TEST(HftForward, ConstantSignalIsDcOnly) {
  FeatureChannels ch{Raster<double>(16, 16, 0.4), Raster<double>(16, 16, -0.2), Raster<double>(16, 16, 0.7)};
  const auto spectrum = hft_forward(ch);
  const double dc = spectrum.amplitude(0, 0);
  ASSERT_GT(dc, 0.0);
  for (int u = 0; u < 16; ++u)
    for (int v = 0; v < 16; ++v)
      if (u != 0 || v != 0) EXPECT_LT(spectrum.amplitude(u, v), 1e-9 * dc);
}

TEST(HftForward, ImpulseHasFlatAmplitude) {
  FeatureChannels ch{Raster<double>(16, 12), Raster<double>(16, 12), Raster<double>(16, 12)};
  ch.rg_opponent(5, 3) = 1.0;
  const auto spectrum = hft_forward(ch);
  const double ref = spectrum.amplitude(0, 0);
  for (double a : spectrum.amplitude.values()) EXPECT_NEAR(a, ref, 1e-9 * ref);
}

TEST(HftForward, AmplitudeAndDirectionInvariants) {
  const auto q = random_quaternions(20, 24, 3);
  const auto s = hft_forward(q);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    const auto& c = s.coeffs.values()[i];
    const auto& d = s.direction.values()[i];
    const double a = s.amplitude.values()[i];
    EXPECT_NEAR(a, std::sqrt(c.norm_squared()), 1e-12 * std::max(1.0, a));
    if (a > 0.0) {
      EXPECT_NEAR(d.norm_squared(), 1.0, 1e-12);
    } else {
      EXPECT_EQ(d, Quaternion{});
    }
    EXPECT_NEAR(a * d.w, c.w, 1e-12 * std::max(1.0, a));
    EXPECT_NEAR(a * d.z, c.z, 1e-12 * std::max(1.0, a));
  }
}

// ---- inverse ----

TEST(HftInverse, RoundTripRecoversSignal) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto q = random_quaternions(64, 64, seed);
    EXPECT_LT(max_abs_diff(hft_inverse(hft_forward(q)), q), 1e-6) << "seed " << seed;
  }
  const auto odd = random_quaternions(17, 9, 99);
  EXPECT_LT(max_abs_diff(hft_inverse(hft_forward(odd)), odd), 1e-6);
}

TEST(HftInverse, ParsevalHolds) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto q = random_quaternions(32, 48, seed);
    const auto s = hft_forward(q);
    double spatial = 0.0;
    for (const auto& v : q.values()) spatial += v.norm_squared();
    double spectral = 0.0;
    for (double a : s.amplitude.values()) spectral += a * a;
    spectral /= static_cast<double>(q.size());
    EXPECT_NEAR(spatial, spectral, 1e-6 * spatial);
  }
}

TEST(HftInverse, ZeroSpectrumGivesZeroRaster) {
  QuaternionSpectrum s{Raster<Quaternion>(8, 8), Raster<double>(8, 8), Raster<Quaternion>(8, 8)};
  const auto out = hft_inverse(s);
  for (const auto& v : out.values()) EXPECT_EQ(v, Quaternion{});
}

TEST(HftInverse, DcOnlySpectrumIsConstantOverArea) {
  const double c = 6.0;
  QuaternionSpectrum s{Raster<Quaternion>(4, 6), {}, {}};
  s.coeffs(0, 0) = {c, 0.0, 0.0, 0.0};
  const auto out = hft_inverse(s);
  for (const auto& v : out.values()) {
    EXPECT_NEAR(v.w, c / 24.0, 1e-15);
    EXPECT_NEAR(v.x, 0.0, 1e-15);
  }
}

TEST(HftInverse, MismatchedFieldsRejected) {
  QuaternionSpectrum s{Raster<Quaternion>(4, 4), Raster<double>(4, 5), {}};
  EXPECT_THROW(hft_inverse(s), InvalidInput);
  EXPECT_THROW(hft_inverse(QuaternionSpectrum{}), InvalidInput);
}

// ---- amplitude smoothing ----

TEST(SmoothAmplitude, TinySigmaIsIdentity) {
  const auto s = hft_forward(random_quaternions(16, 16, 5));
  const auto out = smooth_amplitude(s, 1e-3);
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_DOUBLE_EQ(out.values()[i], s.amplitude.values()[i]);
}

TEST(SmoothAmplitude, HugeSigmaFlattensToMean) {
  const auto s = hft_forward(random_quaternions(32, 32, 6));
  const auto out = smooth_amplitude(s, 32.0);
  double mean = 0.0;
  for (double a : s.amplitude.values()) mean += a;
  mean /= static_cast<double>(s.amplitude.size());
  for (double v : out.values()) EXPECT_LT(std::abs(v - mean), 0.01 * mean);
}

TEST(SmoothAmplitude, PreservesMean) {
  const auto s = hft_forward(random_quaternions(40, 24, 8));
  for (double sigma : {0.5, 1.0, 3.7, 16.0, 100.0}) {
    const auto out = smooth_amplitude(s, sigma);
    double in_sum = 0.0;
    double out_sum = 0.0;
    for (double a : s.amplitude.values()) in_sum += a;
    for (double a : out.values()) out_sum += a;
    EXPECT_NEAR(out_sum, in_sum, 1e-9 * in_sum) << "sigma " << sigma;
  }
}

TEST(SmoothAmplitude, WrapsAroundTheFrequencyPlane) {
  Raster<double> delta(8, 8);
  delta(0, 0) = 1.0;
  const auto out = gaussian_blur_circular(delta, 1.0);
  EXPECT_DOUBLE_EQ(out(0, 7), out(0, 1));
  EXPECT_DOUBLE_EQ(out(7, 7), out(1, 1));
}

TEST(SmoothAmplitude, NonPositiveSigmaRejected) {
  const auto s = hft_forward(random_quaternions(8, 8, 1));
  EXPECT_THROW(smooth_amplitude(s, 0.0), InvalidInput);
  EXPECT_THROW(smooth_amplitude(s, -1.0), InvalidInput);
}

}  // namespace
}  // namespace attncrop
