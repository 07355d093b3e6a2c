#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pinchlab {

/// Global switch between the OpenMP kernels and the serial reference path.
/// Tests flip this to compare the two; the CLI exposes it as --serial.
bool& use_serial_kernels();

/// Parallel index loop. The body must only write to disjoint locations.
template <typename Fn>
void parallel_for(std::ptrdiff_t n, Fn&& fn) {
    if (use_serial_kernels()) {
        for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
        return;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
}

/// Deterministic sum: contributions are materialized per index (in parallel)
/// and accumulated serially in index order, so results do not depend on the
/// thread count.
template <typename Fn>
double parallel_sum(std::ptrdiff_t n, Fn&& term) {
    std::vector<double> buf(static_cast<std::size_t>(n));
    parallel_for(n, [&](std::ptrdiff_t i) { buf[static_cast<std::size_t>(i)] = term(i); });
    double s = 0.0;
    for (double x : buf) s += x;
    return s;
}

} // namespace pinchlab
