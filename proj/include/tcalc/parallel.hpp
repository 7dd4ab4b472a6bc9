#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tcalc::par {

// Loops smaller than this run serially; OpenMP overhead dominates below it.
inline constexpr std::size_t kGrain = 1 << 14;

template <class F>
void for_n(std::size_t n, F&& body, std::size_t grain = kGrain) {
#ifdef _OPENMP
    if (n >= grain) {
        #pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            body(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)grain;
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace tcalc::par
