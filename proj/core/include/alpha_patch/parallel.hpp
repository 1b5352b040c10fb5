#pragma once

#include <cstddef>
#include <functional>

namespace alpha_patch {

/// Worker count: ALPHA_PATCH_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Overrides the worker count for the current process (0 restores the default).
void set_worker_count(unsigned count);

/// Runs body(begin, end) over contiguous chunks of [0, n). Every index is visited
/// exactly once and results written per index are independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace alpha_patch
