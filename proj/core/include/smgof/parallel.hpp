#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace smgof {

inline int effective_parallelism(int requested) {
  if (requested >= 1) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, total) across `parallelism` threads with static
// chunking. Callers own determinism: each index writes only its own slot, so
// results are independent of the schedule. The first exception thrown by any
// worker is rethrown after all threads join.
template <typename Fn>
void parallel_for(std::int64_t total, int parallelism, Fn&& fn) {
  const int workers = static_cast<int>(
      std::min<std::int64_t>(effective_parallelism(parallelism), std::max<std::int64_t>(total, 1)));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < total; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::int64_t begin = total * w / workers;
      const std::int64_t end = total * (w + 1) / workers;
      try {
        for (std::int64_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

} // namespace smgof
