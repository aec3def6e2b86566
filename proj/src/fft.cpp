#include "addcomb/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "addcomb/errors.hpp"

namespace addcomb::fft {
namespace {

struct AlignedBuffer {
  explicit AlignedBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data == nullptr) throw CapacityError("fftw_malloc failed");
  }
  ~AlignedBuffer() { fftw_free(data); }
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  fftw_complex* data;
};

// Plans are created once per (length, sign) with FFTW_ESTIMATE, which makes
// them deterministic, and executed through the new-array interface on
// fftw_malloc'd scratch so alignment always matches the planning buffers.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    AlignedBuffer a(n), b(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), a.data, b.data, sign, FFTW_ESTIMATE);
    if (plan == nullptr) throw CapacityError("fftw could not plan a transform");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void run(std::span<const std::complex<double>> in, std::span<std::complex<double>> out, int sign) {
  if (in.size() != out.size()) throw InvalidArgument("fft: input and output sizes differ");
  const std::size_t n = in.size();
  if (n == 0) return;
  fftw_plan plan = cache().get(n, sign);
  AlignedBuffer src(n), dst(n);
  std::memcpy(src.data, in.data(), sizeof(fftw_complex) * n);
  fftw_execute_dft(plan, src.data, dst.data);
  std::memcpy(static_cast<void*>(out.data()), dst.data, sizeof(fftw_complex) * n);
}

}  // namespace

void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  run(in, out, FFTW_FORWARD);
}

void inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  run(in, out, FFTW_BACKWARD);
}

}  // namespace addcomb::fft
