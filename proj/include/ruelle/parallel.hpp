#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace ruelle {

// Global worker count used by the chunked loops below; the CLI sets this from
// --threads.  Chunk boundaries are fixed by the chunk size alone, and partial
// results are merged in chunk order, so results are identical for any worker
// count.
int thread_count();
void set_thread_count(int n);

// Runs fn(chunk_index, begin, end) for consecutive index ranges of size
// `chunk` covering [0, n).  Chunks may execute on any worker.
template <class F>
void parallel_chunks(std::size_t n, std::size_t chunk, F&& fn) {
  if (n == 0) return;
  if (chunk == 0) chunk = 1;
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  const int workers =
      static_cast<int>(std::min<std::size_t>(n_chunks, thread_count()));
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c)
      fn(c, c * chunk, std::min(n, (c + 1) * chunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      fn(c, c * chunk, std::min(n, (c + 1) * chunk));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
}

// Deterministic reduction: per-chunk partials combined in chunk order.
template <class T, class Map, class Combine>
T parallel_reduce(std::size_t n, std::size_t chunk, T init, Map&& map,
                  Combine&& combine) {
  if (n == 0) return init;
  if (chunk == 0) chunk = 1;
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<T> partial(n_chunks, init);
  parallel_chunks(n, chunk, [&](std::size_t c, std::size_t b, std::size_t e) {
    T acc = init;
    for (std::size_t i = b; i < e; ++i) acc = combine(acc, map(i));
    partial[c] = acc;
  });
  T out = init;
  for (const T& p : partial) out = combine(out, p);
  return out;
}

}  // namespace ruelle
