#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace otkit {

// Splits [0, n) into per-thread chunks, runs chunk_fn(lo, hi) on each,
// and merges the per-chunk results strictly in chunk order, so the
// outcome never depends on the schedule. R must be default-constructible.
template <typename R, typename ChunkFn, typename MergeFn>
R parallel_map_reduce(uint64_t n, int threads, ChunkFn&& chunk_fn, MergeFn&& merge, R init) {
  if (threads < 2 || n < 2) {
    R r = chunk_fn(uint64_t{0}, n);
    return merge(std::move(init), std::move(r));
  }
  uint64_t nchunks = static_cast<uint64_t>(threads);
  if (nchunks > n) nchunks = n;
  std::vector<R> results(nchunks);
  std::vector<std::thread> pool;
  pool.reserve(nchunks);
  uint64_t per = n / nchunks, extra = n % nchunks;
  uint64_t lo = 0;
  for (uint64_t c = 0; c < nchunks; ++c) {
    uint64_t hi = lo + per + (c < extra ? 1 : 0);
    pool.emplace_back([&results, &chunk_fn, c, lo, hi] { results[c] = chunk_fn(lo, hi); });
    lo = hi;
  }
  for (auto& t : pool) t.join();
  R out = std::move(init);
  for (R& r : results) out = merge(std::move(out), std::move(r));
  return out;
}

}  // namespace otkit
