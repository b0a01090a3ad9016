#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace permsum {

inline unsigned resolve_thread_count(unsigned requested) {
  if (requested != 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs fn(0..count-1) across up to `threads` workers. Callers keep results
/// in per-index slots (or merge commutatively), so output never depends on
/// the thread count.
template <class Fn>
void for_each_index(std::size_t count, unsigned threads, Fn&& fn) {
  threads = resolve_thread_count(threads);
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace permsum
