#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fbstrip {

/// Worker count: FB_THREADS if set to a positive integer, else the hardware
/// concurrency (at least 1).
inline unsigned worker_count() {
  if (const char* env = std::getenv("FB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(k) for k in [0, n). Results must be written to per-index slots
/// so the outcome does not depend on scheduling. The first exception is
/// rethrown after all workers finish.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < n; k = next++) {
          try {
            body(k);
          } catch (...) {
            std::lock_guard lock(err_mu);
            if (!err) err = std::current_exception();
          }
        }
      });
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace fbstrip
