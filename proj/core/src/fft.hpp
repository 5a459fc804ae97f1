#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace attncrop::detail {

/// fftw_malloc-backed complex buffer. Plans are created with FFTW_ESTIMATE on
/// buffers of identical alignment, so results are bit-reproducible.
class FftBuffer {
 public:
  FftBuffer(int height, int width);
  ~FftBuffer();
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;
  FftBuffer(FftBuffer&& other) noexcept;
  FftBuffer& operator=(FftBuffer&& other) noexcept;

  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] std::span<std::complex<double>> data() noexcept { return {data_, size_}; }
  [[nodiscard]] std::span<const std::complex<double>> data() const noexcept { return {data_, size_}; }

  /// Unnormalised forward 2-D DFT, in place.
  void forward();
  /// Inverse 2-D DFT scaled by 1/(H*W), in place.
  void inverse();

 private:
  int height_ = 0;
  int width_ = 0;
  std::size_t size_ = 0;
  std::complex<double>* data_ = nullptr;
};

}  // namespace attncrop::detail
