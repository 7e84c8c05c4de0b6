#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ccd {

// Worker count: `requested` if nonzero, else CCD_SIM_THREADS, else the
// hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested);

namespace detail {
// Set on pool workers; nested parallel_for calls then run inline.
inline thread_local bool in_worker = false;
}  // namespace detail

// Calls body(i) for i in [0, n) on up to `threads` workers. Work items must
// write only to their own output slot; callers reduce in index order after
// this returns, so results do not depend on the worker count. The exception
// from the lowest failing index is rethrown.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  threads = detail::in_worker ? 1 : resolve_threads(threads);
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_index = n;
  auto worker = [&] {
    detail::in_worker = true;
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::jthread> pool;
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  pool.reserve(count);
  for (unsigned k = 0; k < count; ++k) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace ccd
