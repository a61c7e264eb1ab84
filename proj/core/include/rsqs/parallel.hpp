#pragma once

#include <cstddef>
#include <functional>

namespace rsqs {

// Worker count: RSQS_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
int worker_count();

// Runs fn(i) for i in [0, count) on up to worker_count() threads. The first
// exception thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace rsqs
