#pragma once

#include <functional>

namespace bmde {

/// BINOM_MDE_THREADS when set, otherwise hardware concurrency; at least 1.
int default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers with a static
/// partition. Results must be written to per-index slots; the decomposition
/// never affects values. The first exception thrown by any worker is
/// rethrown after all workers join.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

} // namespace bmde
