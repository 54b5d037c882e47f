#pragma once

#include <cstddef>
#include <functional>

namespace ucp {

/// Worker count for node-wise loops: hardware concurrency capped by the UCP_THREADS variable.
int thread_budget();

/// Runs body(begin, end) over disjoint contiguous chunks of [0, count). Each index is visited
/// exactly once; results must not depend on chunking.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace ucp
