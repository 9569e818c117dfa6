#pragma once

#include <cstddef>
#include <functional>

namespace chordkit {

// Process-wide worker count used by the data-parallel kernels. Defaults to
// std::thread::hardware_concurrency(); 0 restores the default.
void set_thread_count(unsigned count);
unsigned thread_count();

// Splits [0, count) into contiguous blocks and calls body(begin, end) for each
// block, possibly concurrently. Bodies must only write disjoint output; the
// partition never affects the values computed for a given index.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace chordkit
