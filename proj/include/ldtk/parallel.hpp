#pragma once

#include <cstddef>
#include <functional>

namespace ldtk {

// Worker count: LDTK_THREADS if set and positive, else the hardware count.
unsigned thread_count();

// Runs body(i) for i in [0, n).  Each index is written by exactly one worker,
// so results stored by index are independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ldtk
