#pragma once

#include <cstddef>
#include <functional>

namespace bhsim {

/// Threads requested explicitly, else BHSIM_THREADS, else 1.
int resolve_thread_count(int requested);

/// Runs body(i) for i in [0, n) on up to @p threads workers. Indices are handed
/// out dynamically; callers write results by index so output order is fixed.
/// The first exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

} // namespace bhsim
