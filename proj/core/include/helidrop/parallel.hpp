#pragma once

#include <cstddef>
#include <functional>

namespace helidrop {

/// Worker count: HELIDROP_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int default_thread_count();

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = default).
/// Each index is visited exactly once; the first exception thrown by any
/// task is rethrown after all workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

}  // namespace helidrop
