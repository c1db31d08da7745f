#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fbo2d {

// Runs f(i) for i in [0, n) on up to `threads` workers. Each index owns its output slot,
// so results do not depend on scheduling. The first exception is rethrown.
class ParallelFor {
 public:
  explicit ParallelFor(unsigned threads = 1) : threads_(std::max(1u, threads)) {}

  template <class F>
  void operator()(std::size_t n, F&& f) const {
    const unsigned w = static_cast<unsigned>(std::min<std::size_t>(threads_, n));
    if (w <= 1) {
      for (std::size_t i = 0; i < n; ++i) f(i);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < w; ++t)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= n) return;
          try {
            f(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!err) err = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }

  unsigned threads() const { return threads_; }

 private:
  unsigned threads_;
};

}  // namespace fbo2d
