#ifndef MBQKD_PARALLEL_HPP
#define MBQKD_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace mbqkd::detail {

// Thread budget: hardware concurrency, optionally capped by MBQKD_THREADS.
inline unsigned thread_budget() {
  static const unsigned budget = [] {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("MBQKD_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
  }();
  return budget;
}

// Runs body(i) for i in [0, n). Work is split into a fixed number of chunks
// independent of the thread count, so callers that reduce per-chunk results
// in chunk order get identical output no matter how many threads ran.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const unsigned threads = std::min<std::size_t>(thread_budget(), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace mbqkd::detail

#endif
