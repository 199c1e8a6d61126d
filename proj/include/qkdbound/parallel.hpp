#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace qkdbound {

/// Worker count: QKDBOUND_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
inline int thread_budget() {
  if (const char* env = std::getenv("QKDBOUND_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
      // fall through to the default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs body(i) for i in [0, count), chunked across threads. Results must be
/// written to per-index slots; aggregation order must not matter.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(thread_budget()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace qkdbound
