#pragma once

#include <cstddef>
#include <functional>

namespace thermo {

// Worker count used by row-partitioned kernels. Initialized from
// THERMOPIPE_THREADS when set, otherwise the hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);

// Calls fn(begin, end) over a static partition of [0, n). Every index is
// visited exactly once; results must not depend on the partition.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn,
                  std::size_t min_chunk = 1);

}  // namespace thermo
