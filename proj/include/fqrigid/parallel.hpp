#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace fqrigid::detail {

/// Runs body(i) for i in [0, count) on `jobs` threads, pulling indices from a
/// shared counter. Callers write results into per-index slots, so the merged
/// output does not depend on scheduling.
template <class Body> void parallel_for(std::uint64_t count, unsigned jobs, Body &&body) {
  jobs = std::max(1u, jobs);
  if (jobs == 1 || count <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::uint64_t>(jobs, count); ++t)
    pool.emplace_back([&] {
      for (std::uint64_t i; (i = next.fetch_add(1)) < count;) body(i);
    });
  for (auto &th : pool) th.join();
}

} // namespace fqrigid::detail
