#pragma once

#include <cstddef>
#include <functional>

namespace cubelab {

/// Process-wide worker count used by the parallel loops in the kernels.
/// Defaults to 1. Results never depend on this value: every loop writes
/// into an index-addressed slot and reductions run in index order.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, count). Each worker gets a contiguous block of
/// indices. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Like parallel_for, but body(begin, end) receives whole blocks so that a
/// worker can set up per-task scratch once.
void parallel_blocks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace cubelab
