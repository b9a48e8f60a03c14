#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace argpca {

/// Number of worker threads used when a caller passes threads <= 0.
inline int default_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Serial reference loop for fn(0..count-1).
template <class Fn>
void serial_for(std::int64_t count, Fn&& fn) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
}

/// Runs fn(i) for i in [0, count). fn must write only to slot i of its outputs and must
/// not throw; results are then independent of the schedule.
template <class Fn>
void parallel_for(std::int64_t count, int threads, Fn&& fn) {
#ifdef _OPENMP
    const int nt = threads > 0 ? threads : default_threads();
    if (nt == 1) {
        serial_for(count, fn);
        return;
    }
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
    for (std::int64_t i = 0; i < count; ++i) fn(i);
#else
    (void)threads;
    serial_for(count, fn);
#endif
}

}  // namespace argpca
