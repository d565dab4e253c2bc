#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>

#include <omp.h>

namespace jumpset {

/// Runs body(i) for i in [0, n) on `workers` OpenMP threads with dynamic
/// scheduling. The first exception thrown by any iteration is rethrown
/// after the loop.
template <class Body>
void parallel_for(std::size_t n, int workers, Body&& body) {
    std::exception_ptr failure;
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(std::max(1, workers))
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(jumpset_parallel_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

inline int default_workers() { return omp_get_max_threads(); }

}  // namespace jumpset
