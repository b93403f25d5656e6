#pragma once

#include <cstddef>
#include <functional>

namespace ncho {

/// Worker count: NCHO_THREADS if set to a positive integer, else the number
/// of hardware threads (at least 1).
unsigned thread_count();

/// Calls fn(i) for i in [0, n) split into contiguous chunks over
/// thread_count() workers. fn must only write to state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace ncho
