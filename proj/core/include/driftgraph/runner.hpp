#pragma once

// Deterministic replica execution: tasks fan out over a worker pool, results
// land in task order, so the worker count is a throughput knob only.

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "driftgraph/rng.hpp"

namespace driftgraph {

// Independent master seed for replica `index` of a run.
inline std::uint64_t replica_seed(std::uint64_t run_seed, std::uint64_t index) {
  return rng::derive(rng::derive(run_seed, rng::tag("replica")), index);
}

template <typename R>
std::vector<R> parallel_map(int workers, std::size_t n,
                            const std::function<R(std::size_t)>& f) {
  std::vector<R> results(n);
  if (n == 0) return results;
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = f(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        results[i] = f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  pool.reserve(count);
  for (int w = 0; w < count; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace driftgraph
