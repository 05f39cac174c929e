#pragma once

#include <cstddef>
#include <functional>

namespace idmps {

// Worker cap for parallel_for. Zero restores the default: IDMPS_THREADS if
// set, else the hardware concurrency.
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for every i in [0, n) over contiguous chunks. fn may only write
// state owned by index i, which keeps results independent of the thread
// count. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace idmps
