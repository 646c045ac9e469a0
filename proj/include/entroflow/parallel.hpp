#ifndef ENTROFLOW_PARALLEL_HPP_
#define ENTROFLOW_PARALLEL_HPP_

#include <cstddef>
#include <cstdint>
#include <exception>

#include <omp.h>

namespace entroflow {

// OpenMP worker count for a request; 0 means the runtime default.
inline int resolve_threads(int requested) {
  return requested > 0 ? requested : omp_get_max_threads();
}

// Runs body(i) for i in [0, n) on `threads` workers. Iterations must write
// only to their own slots. The first exception thrown by any iteration is
// rethrown on the calling thread after the loop.
template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
  std::exception_ptr failure;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(resolve_threads(threads))
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(entroflow_parallel_for)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace entroflow

#endif  // ENTROFLOW_PARALLEL_HPP_
