#pragma once

#include <cstddef>
#include <functional>

namespace kinhydro {

/// Number of worker threads used by parallel_for (KINHYDRO_THREADS overrides the hardware count).
unsigned worker_count();

/**
 * Runs body(i) for i in [0, n) on up to worker_count() threads using static
 * contiguous chunks. Each index must write only to its own output slots, which
 * keeps results independent of the thread count.
 */
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace kinhydro
