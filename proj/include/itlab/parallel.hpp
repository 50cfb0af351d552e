#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace itlab {

/// Worker count: LOWRANK_ITLAB_THREADS if set and nonzero, else hardware
/// concurrency. Read on every call so tests can vary it per run.
inline unsigned thread_cap() {
  if (const char* env = std::getenv("LOWRANK_ITLAB_THREADS")) {
    const long v = std::atol(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Runs fn(i) for i in [0, count). Each index is processed exactly once;
/// callers must write results to per-index slots so output is independent
/// of scheduling order.
template <class F>
void parallel_for(std::uint64_t count, F&& fn) {
  const unsigned workers = count > 1 ? std::min<std::uint64_t>(thread_cap(), count) : 1;
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> cursor{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t i = cursor.fetch_add(1, std::memory_order_relaxed);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace itlab
