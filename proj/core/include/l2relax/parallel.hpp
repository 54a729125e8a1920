#pragma once

#include <cstddef>
#include <functional>

namespace l2relax {

/// Run body(i) for i in [0, count) on up to `jobs` threads (jobs ≤ 0 means
/// hardware concurrency). Work is handed out through an atomic counter, so
/// callers must store results by index. The exception of the lowest failing index
/// is rethrown after all threads join.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace l2relax
