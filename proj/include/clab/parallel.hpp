#pragma once

// Execution policy for the grid kernels. Every parallel kernel keeps a serial
// path; both are required to produce bitwise-identical results because each
// grid point is computed independently and reductions are order-free (max/min).

#include <cstddef>
#include <exception>
#include <mutex>

#include <omp.h>

namespace clab {

enum class Exec { serial, parallel };

inline int max_threads() { return omp_get_max_threads(); }
inline void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

/// Calls f(i) for i in [0, n). Exceptions thrown by f are rethrown on the
/// calling thread (first one wins).
template <class F>
void for_each_index(Exec exec, std::size_t n, F&& f) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace clab
