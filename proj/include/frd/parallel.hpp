#pragma once

#include <cstddef>
#include <functional>

namespace frd::parallel {

/// Worker count from FRD_WORKERS, else the hardware concurrency (at least 1).
int worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads in contiguous
/// blocks. Each index is processed exactly once, so results written per index
/// are identical for any worker count. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace frd::parallel
