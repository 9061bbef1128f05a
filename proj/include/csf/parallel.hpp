#pragma once

#include <cstddef>
#include <functional>

namespace csf {

/// Worker count: CSF_THREADS when set and positive, otherwise the hardware
/// concurrency (at least 1).
unsigned thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. The first
/// exception thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace csf
