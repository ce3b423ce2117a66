#pragma once

#include <cstdint>

namespace swing {

// Selects the OpenMP kernel or the serial reference loop. Both produce
// identical results; the serial path exists for testing and benchmarks.
enum class Execution { serial, parallel };

// Runs fn(i) for i in [first, first + count).
template <class Fn>
void for_each_index(std::int64_t first, std::int64_t count, Execution exec, Fn&& fn) {
  if (exec == Execution::parallel && count > 1) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < count; ++i) fn(first + i);
  } else {
    for (std::int64_t i = 0; i < count; ++i) fn(first + i);
  }
}

}  // namespace swing
