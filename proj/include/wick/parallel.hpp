#pragma once

#include <cstddef>
#include <functional>

namespace wick {

/// Worker count: WICK_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, count). Chunks are
/// disjoint, so bodies that only write their own slots stay deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace wick
