// Deterministic data-parallel sweep: results are written by index, so the
// output is independent of the thread count. IGCX_THREADS caps parallelism.

#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace igc {

inline unsigned effective_threads() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("IGCX_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = static_cast<unsigned>(v);
  }
  return n;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const unsigned threads = std::min<std::size_t>(effective_threads(), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace igc
