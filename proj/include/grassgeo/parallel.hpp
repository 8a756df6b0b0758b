#pragma once

// Index-sharded parallel loop. Results must be written into per-index slots;
// with that discipline the output is identical for every thread count. The
// GRASSGEO_THREADS environment variable caps the pool.

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace grassgeo {

inline int max_threads() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("GRASSGEO_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < hw) hw = cap;
  }
  return hw;
}

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t nthreads =
      std::min<std::size_t>(static_cast<std::size_t>(max_threads()), count);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace grassgeo
