#include "zubov/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace zubov {

namespace {

std::atomic<int> g_thread_count{0};

int resolve_threads() {
  const int pinned = g_thread_count.load(std::memory_order_relaxed);
  if (pinned >= 1) return pinned;
  if (const char* env = std::getenv("ZUBOV_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int thread_count() { return resolve_threads(); }

void set_thread_count(int n) {
  g_thread_count.store(n >= 1 ? n : 0, std::memory_order_relaxed);
}

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t chunks = chunk_count(n);
  const auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(begin + kChunk, n);
    fn(c, begin, end);
  };

  const int workers = std::min<std::size_t>(thread_count(), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next.fetch_add(1); c < chunks;
           c = next.fetch_add(1)) {
        run_chunk(c);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace zubov
