#pragma once

#include <cstddef>
#include <functional>

namespace sdeproj {

// Process-wide worker count used by parallel_for when the caller passes 0.
int default_threads();
void set_default_threads(int threads);

// Runs body(i) for i in [0, count). Work items must be independent and write
// only to their own slots; the schedule is a static partition, so output is
// identical for any thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  int threads = 0);

}  // namespace sdeproj
