#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mpx {

/**
 * Runs f(r) for every replica r in [0, count) on up to `workers` threads and
 * returns the results indexed by replica id. Replicas share no mutable state,
 * so the result is identical for any worker count. If any replica throws, the
 * exception of the lowest failing replica id is rethrown.
 */
template <typename F>
auto map_replicas(std::size_t count, std::size_t workers, F&& f)
    -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<R> out(count);
  if (workers <= 1 || count <= 1) {
    for (std::size_t r = 0; r < count; ++r) out[r] = f(r);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::size_t err_replica = count;
  std::exception_ptr err;
  auto work = [&] {
    for (std::size_t r = next++; r < count; r = next++) {
      try {
        out[r] = f(r);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (r < err_replica) {
          err_replica = r;
          err = std::current_exception();
        }
      }
    }
  };
  std::vector<std::jthread> pool;
  const std::size_t n = std::min(workers, count);
  for (std::size_t w = 0; w < n; ++w) pool.emplace_back(work);
  pool.clear();
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace mpx
