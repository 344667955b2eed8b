#pragma once

#include <cstddef>
#include <functional>

namespace folkmetrics {

// Process-wide worker count used by the analyses. 0 selects hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Calls body(i) for every i in [0, n). Work is split into contiguous chunks;
// callers write results into pre-sized slots so output never depends on
// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace folkmetrics
