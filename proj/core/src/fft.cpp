#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <new>
#include <tuple>
#include <utility>

namespace attncrop::detail {

namespace {

// FFTW's planner is not thread-safe; execution of an existing plan on new
// arrays is. Plans are cached per (height, width, sign) for the process lifetime.
class PlanCache {
 public:
  fftw_plan get(int height, int width, int sign, fftw_complex* sample) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(height, width, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    fftw_plan plan = fftw_plan_dft_2d(height, width, sample, sample, sign, FFTW_ESTIMATE);
    if (plan == nullptr) throw std::bad_alloc();
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void execute(FftBuffer& buffer, int sign) {
  if (buffer.data().empty()) return;
  auto* raw = reinterpret_cast<fftw_complex*>(buffer.data().data());
  // FFTW_ESTIMATE planning leaves the array contents untouched.
  fftw_plan plan = plan_cache().get(buffer.height(), buffer.width(), sign, raw);
  fftw_execute_dft(plan, raw, raw);
}

}  // namespace

FftBuffer::FftBuffer(int height, int width)
    : height_(height), width_(width), size_(static_cast<std::size_t>(height) * width) {
  if (size_ == 0) return;
  data_ = static_cast<std::complex<double>*>(fftw_malloc(sizeof(std::complex<double>) * size_));
  if (data_ == nullptr) throw std::bad_alloc();
  for (std::size_t i = 0; i < size_; ++i) new (data_ + i) std::complex<double>();
}

FftBuffer::~FftBuffer() {
  if (data_ != nullptr) fftw_free(data_);
}

FftBuffer::FftBuffer(FftBuffer&& other) noexcept
    : height_(std::exchange(other.height_, 0)),
      width_(std::exchange(other.width_, 0)),
      size_(std::exchange(other.size_, 0)),
      data_(std::exchange(other.data_, nullptr)) {}

FftBuffer& FftBuffer::operator=(FftBuffer&& other) noexcept {
  if (this != &other) {
    if (data_ != nullptr) fftw_free(data_);
    height_ = std::exchange(other.height_, 0);
    width_ = std::exchange(other.width_, 0);
    size_ = std::exchange(other.size_, 0);
    data_ = std::exchange(other.data_, nullptr);
  }
  return *this;
}

void FftBuffer::forward() { execute(*this, FFTW_FORWARD); }

void FftBuffer::inverse() {
  execute(*this, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(size_);
  for (auto& v : data()) v *= scale;
}

}  // namespace attncrop::detail
