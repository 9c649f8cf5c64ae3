#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fibz {

/// Runs body(i) for every i in [0, count) on up to `jobs` threads.
///
/// Work is handed out in fixed-size chunks from a shared counter. If any
/// call throws, the exception from the lowest failing index is rethrown
/// after all workers stop, so the reported failure does not depend on
/// scheduling.
template <class Body>
void parallel_for(std::size_t count, unsigned jobs, Body&& body,
                  std::size_t chunk = 256) {
  if (count == 0) return;
  jobs = std::max(1u, jobs);
  chunk = std::max<std::size_t>(1, chunk);
  const std::size_t chunks = (count + chunk - 1) / chunk;

  std::atomic<std::size_t> next{0};
  std::mutex error_mu;
  std::size_t error_index = count;
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      const std::size_t begin = c * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      for (std::size_t i = begin; i < end; ++i) {
        {
          std::lock_guard lock(error_mu);
          if (i > error_index) break;
        }
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (i < error_index) {
            error_index = i;
            error = std::current_exception();
          }
          break;
        }
      }
    }
  };

  if (jobs == 1 || chunks == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(jobs, chunks));
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace fibz
