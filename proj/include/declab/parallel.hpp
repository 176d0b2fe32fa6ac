#pragma once

#include <cstddef>
#include <functional>

namespace declab {

// Worker count from DECLAB_THREADS, else hardware concurrency.
unsigned thread_budget();
void set_thread_budget(unsigned n);

// Calls body(begin, end) on contiguous blocks of [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body, std::size_t min_block = 4096);

}  // namespace declab
