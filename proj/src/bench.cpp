#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "error.hpp"
#include "random.hpp"

namespace gmsd {

namespace {

// Keeps the optimizer from discarding the timed computation.
volatile double g_bench_sink = 0.0;

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point t0, Clock::time_point t1) {
    return std::chrono::duration<double>(t1 - t0).count();
}

Image random_image(int width, int height, Rng &rng) {
    Image img = make_image(width, height);
    for (double &s : img.samples)
        s = rng.uniform();
    return img;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Least-squares slope of y against x.
double fitted_slope(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() < 2)
        return std::numeric_limits<double>::quiet_NaN();
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

} // namespace

BenchReport bench_metric(Metric metric, const std::vector<std::pair<int, int>> &sizes,
                         int repeats, std::uint64_t seed, bool parallel) {
    if (repeats < 5)
        throw InvalidArgument("bench_metric: repeats must be >= 5, got " +
                              std::to_string(repeats));
    if (sizes.empty())
        throw InvalidArgument("bench_metric: no sizes given");

    const int hw_threads = std::max(2u, std::thread::hardware_concurrency());
    BenchReport report;
    report.metric = metric;
    report.repeats = repeats;
    report.seed = seed;
    report.parallel_threads = parallel ? hw_threads : 0;

    MetricOptions options; // defaults: c = 0.0026, downsample on

    std::vector<double> log_n, log_t, log_t_par;
    for (size_t si = 0; si < sizes.size(); ++si) {
        const auto [w, h] = sizes[si];
        Rng rng(seed + 0x9E3779B97F4A7C15ull * (si + 1));
        Image ref = random_image(w, h, rng);
        Image dist = apply_distortion(
            ref, {DistortionKind::AdditiveWhiteNoise, 0.05, seed ^ (si + 1)});

        auto run_once = [&](int threads) {
            switch (metric) {
            case Metric::Gmsd:
                g_bench_sink = compute_gmsd(ref, dist, options, threads).gmsd;
                break;
            case Metric::Gmsm:
                g_bench_sink = compute_gmsm_only(ref, dist, options, threads);
                break;
            case Metric::Psnr:
                g_bench_sink = psnr(ref, dist);
                break;
            case Metric::MseSd:
                g_bench_sink = mse_sd_index(ref, dist);
                break;
            }
        };
        run_once(1); // validates the size for the metric before timing

        // Auto-batch until one measurement spans >= 1 ms, so coarse timers
        // cannot dominate the smallest sizes.
        auto measure = [&](int threads, int batch) {
            auto t0 = Clock::now();
            for (int i = 0; i < batch; ++i)
                run_once(threads);
            return elapsed_seconds(t0, Clock::now());
        };
        auto calibrate = [&](int threads) {
            int batch = 1;
            while (measure(threads, batch) < 1e-3 && batch < (1 << 24))
                batch *= 2;
            return batch;
        };
        auto timed_median = [&](int threads, int batch) {
            std::vector<double> samples(static_cast<size_t>(repeats));
            for (double &t : samples)
                t = measure(threads, batch) / batch;
            return median(std::move(samples));
        };

        BenchSizeEntry entry;
        entry.width = w;
        entry.height = h;
        entry.pixels = static_cast<std::int64_t>(w) * h;
        entry.batch = calibrate(1);
        entry.seconds = timed_median(1, entry.batch);
        if (parallel)
            entry.seconds_parallel = timed_median(hw_threads, calibrate(hw_threads));

        // Auxiliary high-water mark of one invocation, excluding inputs.
        alloc_stats::reset_peak();
        const long long before = alloc_stats::current_samples();
        run_once(1);
        const double aux = static_cast<double>(alloc_stats::peak_samples() - before) /
                           static_cast<double>(entry.pixels);
        report.aux_samples_per_pixel = std::max(report.aux_samples_per_pixel, aux);

        log_n.push_back(std::log(static_cast<double>(entry.pixels)));
        log_t.push_back(std::log(entry.seconds));
        if (parallel)
            log_t_par.push_back(std::log(entry.seconds_parallel));
        report.entries.push_back(entry);
    }

    report.scaling_exponent = fitted_slope(log_n, log_t);
    report.scaling_exponent_parallel =
        parallel ? fitted_slope(log_n, log_t_par) : std::numeric_limits<double>::quiet_NaN();
    return report;
}

} // namespace gmsd
