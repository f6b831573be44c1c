// Thread-pool-free parallel loop over disjoint index chunks.  CZLAB_THREADS
// caps the worker count; writes must go to disjoint slots so the result does
// not depend on scheduling.
#ifndef CZLAB_PARALLEL_HPP
#define CZLAB_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace czlab {

// Worker cap from CZLAB_THREADS (default: hardware concurrency), cached.
int worker_count();

// Runs body(i) for i in [0, n), split into contiguous chunks across workers.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body);

}  // namespace czlab

#endif  // CZLAB_PARALLEL_HPP
