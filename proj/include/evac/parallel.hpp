#pragma once

#include <cstddef>
#include <functional>

namespace evac {

/// Worker count from EVAC_THREADS (positive integer), else hardware concurrency, at least 1.
std::size_t thread_count();

/// Calls body(i) for i in [0, n) across thread_count() workers. Each index is processed
/// exactly once; callers write results into per-index slots so that output does not depend
/// on scheduling. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace evac
