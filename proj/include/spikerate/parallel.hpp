#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spikerate {

// Execution policy for the embarrassingly parallel outer loops (path segments,
// bootstrap replicates, seed sweeps). Inner kernel sums stay serial with a fixed
// summation order, so results are bit-identical across policies and thread counts.
enum class Exec { serial, parallel };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <class F>
void parallel_for(Exec exec, std::int64_t n, F&& body) {
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < n; ++i) body(i);
    } else {
        for (std::int64_t i = 0; i < n; ++i) body(i);
    }
}

} // namespace spikerate
