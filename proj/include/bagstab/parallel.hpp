#pragma once

#include <cstddef>
#include <functional>

namespace bagstab {

/// Worker count: STAB_THREADS when set to a positive integer, otherwise the
/// hardware concurrency.
std::size_t thread_count();

/// Runs body(0..count-1) on up to thread_count() threads. Calls made from
/// inside a body run inline on the calling thread. If any body throws, the
/// exception from the lowest failing index is rethrown after all workers
/// finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace bagstab
