#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace genquot {

/// Worker count used by parallel_for. 0 means "logical cores".
void set_thread_count(std::size_t threads);
std::size_t thread_count();

/// Runs body(i) for i in [0, count). Iterations must be independent; callers
/// write results into per-index slots so the outcome does not depend on the
/// schedule. Nested calls run serially on the calling worker. The first
/// exception (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F&& fn) {
  std::vector<T> out(count);
  parallel_for(count, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace genquot
