#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#if defined(HMORREY_HAVE_OPENMP)
#include <omp.h>
#endif

namespace hmorrey {

inline void set_threads(int n) {
#if defined(HMORREY_HAVE_OPENMP)
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

inline int thread_count() {
#if defined(HMORREY_HAVE_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Runs body(i) for i in [0, n). The first exception thrown by any iteration is
// rethrown on the calling thread once the loop has finished.
template <class Body>
void parallel_for(std::size_t n, Body&& body, bool parallel = true) {
    if (!parallel || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex m;
#if defined(HMORREY_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        {
            std::lock_guard<std::mutex> lock(m);
            if (failure) continue;
        }
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(m);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace hmorrey
