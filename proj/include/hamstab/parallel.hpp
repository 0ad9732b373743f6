#pragma once

#include <cstddef>
#include <functional>

namespace hamstab {

/// Worker-pool width: HAMSTAB_THREADS when set (>= 1), otherwise the
/// hardware concurrency.
int max_threads();

/// Runs fn(0..count-1) on up to max_threads() workers. Exceptions from
/// workers are rethrown (first one wins). Falls back to a plain loop for
/// small counts.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace hamstab
