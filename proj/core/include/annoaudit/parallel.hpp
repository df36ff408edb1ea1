#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace annoaudit {

/// Resolves a requested worker count: 0 means all hardware threads.
unsigned resolve_threads(unsigned requested) noexcept;

/// Runs task(i) for i in [0, n) on up to `threads` workers. Tasks are claimed
/// dynamically; callers must write results by index so output does not depend
/// on scheduling. The first exception thrown by a task is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& task);

}  // namespace annoaudit
