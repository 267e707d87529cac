#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qtlab {

/// Counts indices in [0, n) satisfying pred, splitting the range across
/// hardware threads. pred must be safe to call concurrently. The first
/// exception thrown by any worker is rethrown.
template <class Pred>
std::uint64_t parallel_count(std::uint64_t n, Pred pred) {
  const std::uint64_t hw = std::max(1U, std::thread::hardware_concurrency());
  const std::uint64_t workers = std::min<std::uint64_t>(hw, std::max<std::uint64_t>(1, n / 64));
  if (workers <= 1) {
    std::uint64_t c = 0;
    for (std::uint64_t i = 0; i < n; ++i) c += pred(i) ? 1 : 0;
    return c;
  }
  std::atomic<std::uint64_t> total{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::uint64_t begin = n * w / workers;
      const std::uint64_t end = n * (w + 1) / workers;
      std::uint64_t c = 0;
      try {
        for (std::uint64_t i = begin; i < end; ++i) c += pred(i) ? 1 : 0;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
      total += c;
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return total.load();
}

}  // namespace qtlab
