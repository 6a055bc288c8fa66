// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace bm {

// Worker count: BM_THREADS if set and positive, else hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("BM_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Splits [0, n) into at most `threads` contiguous chunks and runs
// fn(chunk_index, begin, end) for each. Chunk boundaries depend only on
// (n, threads), so callers that concatenate per-chunk results in chunk order
// get output independent of scheduling.
template <typename Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn) {
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  const std::size_t step = (n + chunks - 1) / std::max<std::size_t>(chunks, 1);
  if (chunks <= 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = std::min(n, c * step);
    const std::size_t end = std::min(n, begin + step);
    pool.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
  }
}

}  // namespace bm
