#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>

#ifdef BBM_USE_OPENMP
#include <omp.h>
#endif

namespace bbm {

/// Runs body(i) for i in [0, n). Iterations must be independent; results are
/// written to per-index slots so the outcome does not depend on scheduling.
/// The first exception thrown by any iteration is rethrown after the loop.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
#ifdef BBM_USE_OPENMP
  std::exception_ptr first;
  std::mutex guard;
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
#else
  for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

/// Applies the BBM_NUM_THREADS environment variable, if set.
inline void configure_threads_from_env() {
#ifdef BBM_USE_OPENMP
  if (const char* env = std::getenv("BBM_NUM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

}  // namespace bbm
