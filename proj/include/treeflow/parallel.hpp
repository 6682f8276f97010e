#pragma once

#include <functional>

namespace treeflow {

// Process-wide cap for scan parallelism. 0 means hardware concurrency.
void set_max_threads(int n);
int max_threads();

// Runs fn(i) for i in [0, count) on up to max_threads() workers. Callers must
// write results into per-index slots so the outcome is schedule-independent;
// reductions happen afterwards on the caller's thread.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace treeflow
