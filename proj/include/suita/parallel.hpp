#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace suita {

// Internal parallelism cap: SUITA_THREADS if set, otherwise the machine
// parallelism. Results never depend on the thread count.
inline int thread_budget() {
  static const int budget = [] {
    if (const char* env = std::getenv("SUITA_THREADS")) {
      int v = std::atoi(env);
      if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }();
  return budget;
}

// Run fn(i) for i in [0, count) across at most thread_budget() threads.
// Each index is processed exactly once; fn must only write to disjoint
// per-index state so the result is independent of scheduling.
inline void parallel_for(int count, const std::function<void(int)>& fn) {
  int threads = std::min(thread_budget(), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < count; i += threads) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace suita
