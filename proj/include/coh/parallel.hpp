#pragma once

#include <cstddef>
#include <functional>

namespace coh {

/// Worker count used when a caller passes 0: the value set by
/// set_default_threads, else std::thread::hardware_concurrency().
unsigned default_threads();
void set_default_threads(unsigned threads);

/// Runs body(i) for every i in [0, count) on up to `threads` workers
/// (0 = default). Indices are handed out dynamically, so body must write
/// only to slots owned by i; results are then independent of scheduling.
/// The first exception thrown by any body is rethrown on the caller.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace coh
