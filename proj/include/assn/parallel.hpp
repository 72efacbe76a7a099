#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace assn {

// Thread count resolution: ASSN_THREADS env var, else hardware concurrency.
// A thread-local override lets outer parallel loops force nested loops serial.
inline thread_local int tl_thread_override = 0;

inline int thread_count() {
  if (tl_thread_override > 0) return tl_thread_override;
  if (const char* env = std::getenv("ASSN_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(begin, end) on contiguous chunks of [first, last). Chunk boundaries
// depend on the thread count, so fn must write disjoint state only; all
// reductions in this codebase are either per-index or done serially afterwards.
inline void parallel_for(std::int64_t first, std::int64_t last,
                         const std::function<void(std::int64_t, std::int64_t)>& fn) {
  const std::int64_t n = last - first;
  if (n <= 0) return;
  int nthreads = std::min<std::int64_t>(thread_count(), n);
  if (nthreads <= 1) {
    fn(first, last);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nthreads - 1);
  const std::int64_t chunk = (n + nthreads - 1) / nthreads;
  for (int t = 1; t < nthreads; ++t) {
    std::int64_t b = first + t * chunk;
    std::int64_t e = std::min(last, b + chunk);
    if (b >= e) break;
    workers.emplace_back([&fn, b, e] {
      tl_thread_override = 1;  // nested loops run serial
      fn(b, e);
    });
  }
  {
    int saved = tl_thread_override;
    tl_thread_override = 1;
    fn(first, std::min(last, first + chunk));
    tl_thread_override = saved;
  }
  for (auto& w : workers) w.join();
}

}  // namespace assn
