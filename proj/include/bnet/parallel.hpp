#pragma once

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

// Replicate-level parallelism. Results land in per-replicate slots and
// are reduced in slot order, so output is independent of the worker
// count. BNET_WORKERS overrides the thread count.

namespace bnet::parallel {

inline unsigned worker_count(unsigned requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BNET_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// fn(i) -> T, for i in [0, n); returns results in index order.
template <class T, class Fn>
std::vector<T> map_indexed(std::size_t n, const Fn& fn, unsigned workers = 0) {
  std::vector<T> out(n);
  const unsigned w = std::min<std::size_t>(worker_count(workers), n ? n : 1);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (unsigned k = 0; k < w; ++k) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        out[i] = fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace bnet::parallel
