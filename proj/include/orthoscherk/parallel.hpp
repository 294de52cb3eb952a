#pragma once

#include <functional>

namespace orthoscherk {

// Worker count: ORTHOSCHERK_THREADS when set to a positive integer, else the
// hardware concurrency (at least 1).
int thread_count();

// Runs fn(i) for i in [0, n) over thread_count() workers. Each index is
// handled exactly once; results must be written to per-index slots so the
// outcome does not depend on scheduling.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace orthoscherk
