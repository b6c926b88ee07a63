#pragma once

#include <cstddef>
#include <functional>

namespace pilotfeas {

// Process-wide worker budget used by every parallel loop. Defaults to the
// hardware concurrency; setting it never changes numeric results, only timing.
std::size_t max_threads();
void set_max_threads(std::size_t n);

// Evaluates body(i) for i in [0, n) across workers. Each index is evaluated
// exactly once and bodies must write only to their own index's slot, so the
// result is identical for every thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace pilotfeas
