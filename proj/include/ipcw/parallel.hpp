#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace ipcw {

//! Worker count: explicit request, else IPCW_THREADS, else hardware.
inline unsigned thread_count(unsigned requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("IPCW_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

//! Run fn(i) for i in [0, count). Each index owns its output slot, so
//! results do not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, unsigned nthreads, Fn&& fn) {
  nthreads = thread_count(nthreads);
  if (nthreads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nthreads);
  for (unsigned t = 0; t < nthreads; ++t) {
    workers.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += nthreads) fn(i);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace ipcw
