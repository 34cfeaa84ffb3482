#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rr {

/// Number of worker threads to use when the caller passes 0.
inline int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(begin, end, chunk) over `count` items split into contiguous
/// chunks, one per worker. Chunk boundaries depend only on (count, threads),
/// and callers merge per-chunk results in chunk order, so reductions are
/// schedule independent. The first exception thrown by a worker is rethrown.
template <class Fn>
void parallel_chunks(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 0) threads = default_threads();
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(count, threads));
  if (workers <= 1) {
    fn(std::size_t{0}, count, std::size_t{0});
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t base = count / workers;
  const std::size_t extra = count % workers;
  std::size_t begin = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t len = base + (w < extra ? 1 : 0);
    const std::size_t end = begin + len;
    pool.emplace_back([&, begin, end, w] {
      try {
        fn(begin, end, w);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Number of chunks parallel_chunks will create for (count, threads).
inline std::size_t chunk_count(std::size_t count, int threads) {
  if (threads <= 0) threads = default_threads();
  return std::max<std::size_t>(1, std::min<std::size_t>(count, threads));
}

}  // namespace rr
