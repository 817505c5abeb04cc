#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace doilab::parallel {

// Worker count: DOILAB_THREADS if set to a positive integer, else the
// hardware concurrency (at least 1).
std::size_t thread_count();

// Evaluates fn(0), ..., fn(count - 1) on up to thread_count() threads and
// returns the results in index order. The first exception thrown by a task is
// rethrown after all workers finish.
template <typename T, typename Fn>
std::vector<T> map(std::size_t count, Fn fn) {
  std::vector<T> out(count);
  const std::size_t workers = std::min(thread_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            out[i] = fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace doilab::parallel
