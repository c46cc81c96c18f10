#pragma once

#include <cstddef>
#include <functional>

namespace zubov {

/// Worker threads used by chunked loops. Resolution order: the value given to
/// set_thread_count (CLI --threads), else the ZUBOV_THREADS environment
/// variable, else hardware concurrency.
int thread_count();

/// n >= 1 pins the count; n <= 0 restores automatic resolution.
void set_thread_count(int n);

/// Fixed chunk width shared by every parallel loop. Work is split into chunks
/// of this size and per-chunk results are combined in chunk order, so results
/// do not depend on the number of workers.
inline constexpr std::size_t kChunk = 1024;

std::size_t chunk_count(std::size_t n);

/// Runs fn(chunk_index, begin, end) over [0, n). fn must only write to state
/// owned by its chunk index.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& fn);

}  // namespace zubov
