#ifndef GMSD_BENCH_HPP
#define GMSD_BENCH_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "evaluate.hpp"

namespace gmsd {

struct BenchSizeEntry {
    int width = 0;
    int height = 0;
    std::int64_t pixels = 0;
    double seconds = 0.0;          // median of repeats, single-threaded
    double seconds_parallel = 0.0; // 0 when the parallel mode was not run
    int batch = 1;                 // kernel invocations per measurement
};

struct BenchReport {
    Metric metric = Metric::Gmsd;
    int repeats = 0;
    std::uint64_t seed = 0;
    int parallel_threads = 0; // 0 when the parallel mode was not run
    std::vector<BenchSizeEntry> entries;
    // Least-squares slope of log(seconds) against log(pixels); NaN with
    // fewer than two sizes. 1.0 means time scales linearly with N.
    double scaling_exponent = 0.0;
    double scaling_exponent_parallel = 0.0;
    // Measured high-water auxiliary allocation of one kernel invocation,
    // in samples per input pixel (worst size). Documented bound: <= 6.
    double aux_samples_per_pixel = 0.0;
};

// Times the end-to-end metric (no file I/O) on a seeded random image pair
// per size: a uniform random reference and a noisy version of it. Each
// measurement is auto-batched until it spans at least 1 ms, the median of
// `repeats` measurements is reported, and the log-log scaling exponent is
// fitted across sizes. Requires repeats >= 5 and sizes valid for the
// metric's minimum-dimension rules.
BenchReport bench_metric(Metric metric, const std::vector<std::pair<int, int>> &sizes,
                         int repeats, std::uint64_t seed, bool parallel = false);

} // namespace gmsd

#endif
