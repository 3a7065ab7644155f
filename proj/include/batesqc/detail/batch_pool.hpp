#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace batesqc::detail {

/// Splits [0, items) into contiguous batches of `batch_size` and hands them
/// to `workers` threads on a first-come basis. `fn(worker, begin, end)` is
/// called once per batch; a worker index is owned by exactly one thread.
/// The first exception thrown by any batch is rethrown after all threads
/// have joined.
template <class Fn>
void run_batches(std::size_t items, std::size_t batch_size, std::size_t workers, Fn&& fn) {
  if (items == 0) return;
  batch_size = std::max<std::size_t>(batch_size, 1);
  const std::size_t batches = (items + batch_size - 1) / batch_size;
  const std::size_t threads = std::clamp<std::size_t>(workers, 1, batches);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto drain = [&](std::size_t worker) {
    for (;;) {
      const std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= batches) return;
      const std::size_t begin = b * batch_size;
      const std::size_t end = std::min(items, begin + batch_size);
      try {
        fn(worker, begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(batches);
        return;
      }
    }
  };

  if (threads == 1) {
    drain(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(drain, w);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace batesqc::detail
