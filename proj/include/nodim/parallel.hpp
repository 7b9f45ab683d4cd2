#pragma once

#include <cstddef>
#include <functional>

namespace nodim {

/// Caps the worker count used by parallel loops (0 = hardware concurrency).
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs fn(i) for i in [0, count). Each index is visited exactly once; callers
/// write results by index, so output never depends on the thread count.
/// The first exception thrown by any task is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace nodim
