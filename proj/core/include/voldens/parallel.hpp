#pragma once

#include <cstddef>
#include <functional>

namespace voldens {

/// Worker count: VOLDENS_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, count). Chunking is a
/// pure function of count and worker_count(), so outputs written per index are
/// identical for any thread count. The first exception thrown by a worker is
/// rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace voldens
