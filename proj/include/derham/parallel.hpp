#pragma once

#include <cstddef>
#include <functional>

namespace derham {

/// Worker count: DERHAM_LAB_THREADS when set and positive, otherwise the
/// hardware concurrency (at least one).
int worker_count();

/// Run body(i) for i in [0, n) on up to worker_count() threads. Each index
/// runs exactly once; callers write results into per-index slots so that
/// reductions stay in a fixed order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace derham
