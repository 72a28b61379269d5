// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace kob {

/// Worker count from KOB_JOBS, else hardware concurrency (at least 1).
unsigned default_jobs();

/// Calls fn(i) for i in [0, n) on up to `jobs` threads. Callers write
/// results into slot i, so output order never depends on scheduling. The
/// first exception (by index) is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn &&fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t err_index = n;
  std::exception_ptr err;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n)
        return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t)
      pool.emplace_back(worker);
  }
  if (err)
    std::rethrow_exception(err);
}

} // namespace kob
