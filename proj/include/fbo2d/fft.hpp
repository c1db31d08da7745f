#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace fbo2d::detail {

// FFTW planning is not thread-safe, execution with the new-array interface is.
// Plans are built once per shape under a lock and then reused from any thread.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  // sign = FFTW_FORWARD or FFTW_BACKWARD; n0 is the slow (y) dimension.
  fftw_plan get(int n0, int n1, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_tuple(n0, n1, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n0) * n1);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = n0 == 1 ? fftw_plan_dft_1d(n1, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
                             : fftw_plan_dft_2d(n0, n1, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }

 private:
  PlanCache() = default;
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

// In-place unnormalized DFT; n0 == 1 gives a 1-D transform of length n1.
inline void dft_inplace(std::vector<std::complex<double>>& a, int n0, int n1, int sign) {
  fftw_plan plan = PlanCache::instance().get(n0, n1, sign);
  auto* p = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(plan, p, p);
}

}  // namespace fbo2d::detail
