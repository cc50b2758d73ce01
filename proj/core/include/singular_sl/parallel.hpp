#pragma once

#include <cstddef>
#include <functional>

namespace singular_sl {

/// Worker count: SINGULAR_SL_THREADS if set to a positive integer, otherwise
/// std::thread::hardware_concurrency() (at least 1).
int worker_count();

/// Calls body(i) for i in [0, n) on up to worker_count() threads. Results must be
/// written to per-index slots; the first exception thrown is rethrown after all
/// workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace singular_sl
