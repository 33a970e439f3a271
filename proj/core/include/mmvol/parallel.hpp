#ifndef MMVOL_PARALLEL_HPP
#define MMVOL_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace mmvol {

// Worker count: MT_THREADS if set (clamped to >= 1), else hardware
// concurrency.
inline int worker_count() {
  if (const char* env = std::getenv("MT_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
    return 1;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

// Runs fn(block) for block in [0, n_blocks) across workers. Blocks are
// claimed dynamically; callers must make fn write only to per-block storage
// so the result is independent of the schedule. If any block throws, the
// exception from the lowest-numbered failing block is rethrown.
template <class Fn>
void parallel_for_blocks(uint64_t n_blocks, Fn&& fn) {
  int workers = worker_count();
  if (workers > 1 && static_cast<uint64_t>(workers) > n_blocks)
    workers = static_cast<int>(n_blocks);

  if (workers <= 1 || n_blocks <= 1) {
    for (uint64_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }

  std::atomic<uint64_t> next{0};
  std::vector<std::exception_ptr> errors(n_blocks);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
        if (b >= n_blocks) return;
        try {
          fn(b);
        } catch (...) {
          errors[b] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (uint64_t b = 0; b < n_blocks; ++b)
    if (errors[b]) std::rethrow_exception(errors[b]);
}

}  // namespace mmvol

#endif  // MMVOL_PARALLEL_HPP
