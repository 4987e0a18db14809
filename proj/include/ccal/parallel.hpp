#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>

namespace ccal {

/// Execution mode for the data-parallel kernels. Every kernel yields
/// bit-identical output in both modes; Serial is the reference the tests
/// compare against.
enum class ExecMode { Serial, Parallel };

/// Worker threads the Parallel mode will use (1 without OpenMP).
int worker_count();

/// Caps the OpenMP thread count; n <= 0 keeps the runtime default.
void set_worker_count(int n);

template <class F>
void parallel_for(std::size_t n, ExecMode mode, F&& body) {
  if (mode == ExecMode::Parallel && n > 1) {
    std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
#ifdef _OPENMP
#pragma omp critical(ccal_parallel_for_error)
#endif
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (std::size_t i = 0; i < n; ++i) body(i);
  }
}

}  // namespace ccal
