#pragma once

#include <cstddef>
#include <functional>

namespace ldtlab {

// Worker count: LDTLAB_THREADS if set, else hardware concurrency.
unsigned thread_count();
// Overrides the environment for the current process (0 restores it).
void set_thread_count(unsigned n);

// Calls fn(i) for i in [0, n). fn must only write state owned by index i;
// callers reduce per-index results in index order, which keeps output
// independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace ldtlab
