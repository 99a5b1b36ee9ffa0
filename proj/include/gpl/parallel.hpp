#pragma once

#include <cstddef>
#include <functional>

namespace gpl {

/// Worker count: GPL_THREADS if set and positive, else the hardware concurrency (at least 1).
int worker_count();

/// Runs body(i) for i in [0, n) over contiguous chunks; results must be written to disjoint slots.
/// The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gpl
