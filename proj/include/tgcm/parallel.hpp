#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace tgcm {

// Worker-thread cap from TGC_THREADS; default 1 keeps runs deterministic
// without configuration.
inline int worker_threads() {
  const char* env = std::getenv("TGC_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  if (n < 1) return 1;
  if (n > 256) return 256;
  return n;
}

// Index-chunked loop; fn(i) must only touch slot i of any shared output, so
// results are identical for any thread count.
template <typename Fn>
void parallel_for(std::size_t n, const Fn& fn) {
  int threads = worker_threads();
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t chunk = (n + threads - 1) / static_cast<std::size_t>(threads);
  std::vector<std::thread> workers;
  for (int t = 0; t < threads; ++t) {
    std::size_t begin = static_cast<std::size_t>(t) * chunk;
    std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([begin, end, &fn] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace tgcm
