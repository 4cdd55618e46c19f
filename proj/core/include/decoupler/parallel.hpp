#pragma once

#include <cstddef>
#include <functional>

namespace decoupler {

/// Worker count from DECOUPLER_THREADS, else the hardware concurrency.
int default_thread_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers. Bodies must write
/// only to slots owned by their index; the first exception (lowest index) is
/// rethrown after all workers join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace decoupler
