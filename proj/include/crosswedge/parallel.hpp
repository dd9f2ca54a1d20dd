#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace crosswedge {

inline unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1u;
}

// Static block partition of [0, n).  Workers must write only to disjoint,
// preallocated slots and must not throw; the partition must never influence
// the result.
template <class Fn>
void parallel_for_blocks(std::size_t n, unsigned threads, Fn&& fn) {
  if (n == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(resolve_thread_count(threads), n);
  if (workers <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = n / workers;
  const std::size_t extra = n % workers;
  std::size_t begin = 0;
  for (std::size_t t = 0; t < workers; ++t) {
    const std::size_t end = begin + chunk + (t < extra ? 1 : 0);
    if (t + 1 == workers) {
      fn(begin, end);
    } else {
      pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    begin = end;
  }
  for (auto& th : pool) th.join();
}

}  // namespace crosswedge
