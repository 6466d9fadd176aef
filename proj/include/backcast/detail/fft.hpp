#pragma once

// Thin FFTW3 wrapper: unnormalized complex DFTs of arbitrary length with
// plans cached per length. Execution uses the new-array interface, which
// FFTW documents as thread-safe; only planning is serialized.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <vector>

namespace backcast::detail {

class FftPlanCache {
 public:
  struct Plans {
    fftw_plan forward;
    fftw_plan backward;
  };

  static FftPlanCache& instance() {
    static FftPlanCache cache;
    return cache;
  }

  Plans get(std::size_t n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int len = static_cast<int>(n);
    Plans p{fftw_plan_dft_1d(len, in, out, FFTW_FORWARD, flags),
            fftw_plan_dft_1d(len, in, out, FFTW_BACKWARD, flags)};
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(n, p);
    return p;
  }

  FftPlanCache(const FftPlanCache&) = delete;
  FftPlanCache& operator=(const FftPlanCache&) = delete;

  ~FftPlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

 private:
  FftPlanCache() = default;
  std::mutex mutex_;
  std::map<std::size_t, Plans> plans_;
};

/// out[k] = sum_j in[j] exp(sign * 2 pi i j k / n), sign = -1 (forward) or +1.
inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in,
                                             bool forward) {
  std::vector<std::complex<double>> out(in.size());
  if (in.empty()) return out;
  const auto plans = FftPlanCache::instance().get(in.size());
  // fftw_complex is layout-compatible with std::complex<double>.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(forward ? plans.forward : plans.backward, src, dst);
  return out;
}

}  // namespace backcast::detail
