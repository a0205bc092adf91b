// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#include "ns2d/fft.hpp"

#include <fftw3.h>
#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

namespace ns2d::fft {
namespace {

#if defined(__GLIBC__)
// Field buffers are a few hundred KB. By default glibc serves each one with a
// fresh mmap and faults every page in again, which costs more than the FFT.
[[maybe_unused]] const bool kAllocatorTuned = [] {
  mallopt(M_MMAP_THRESHOLD, 64 << 20);
  mallopt(M_TRIM_THRESHOLD, 256 << 20);
  return true;
}();
#endif

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  // Plans made on fftw_malloc'd buffers may use SIMD codelets; they are only
  // valid for arrays with the same alignment, so misaligned calls get a plan
  // made with FFTW_UNALIGNED.
  fftw_plan get(int n, int sign, bool aligned) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_tuple(n, sign, aligned);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    const auto total = static_cast<std::size_t>(n) * n;
    auto* in = fftw_alloc_complex(total);
    auto* out = fftw_alloc_complex(total);
    fftw_plan plan = fftw_plan_dft_2d(n, n, in, out, sign, FFTW_ESTIMATE | (aligned ? 0u : FFTW_UNALIGNED));
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw std::runtime_error("fftw: plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void run(std::span<const cplx> in, std::span<cplx> out, int n, int sign) {
  const auto total = static_cast<std::size_t>(n) * n;
  if (in.size() != total || out.size() != total) throw std::invalid_argument("fft: array size mismatch");
  auto* pin = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
  auto* pout = reinterpret_cast<fftw_complex*>(out.data());
  const bool aligned = fftw_alignment_of(reinterpret_cast<double*>(pin)) == 0 &&
                       fftw_alignment_of(reinterpret_cast<double*>(pout)) == 0;
  fftw_plan plan = cache().get(n, sign, aligned);
  // Out-of-place complex transforms leave the input untouched.
  fftw_execute_dft(plan, pin, pout);
}

}  // namespace

void forward(std::span<const cplx> in, std::span<cplx> out, int n) { run(in, out, n, FFTW_FORWARD); }
void inverse(std::span<const cplx> in, std::span<cplx> out, int n) { run(in, out, n, FFTW_BACKWARD); }

}  // namespace ns2d::fft
