#pragma once

#include <cstddef>
#include <functional>

namespace collab {

/// Worker count: COLLAB_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs body(task) for every task in [0, n_tasks) on up to `threads` workers.
/// Tasks are handed out in increasing order; the first exception thrown by a
/// task is rethrown after all workers join.
void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)>& body,
                  std::size_t threads = thread_count());

}  // namespace collab
