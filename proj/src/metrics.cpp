#include "metrics.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "error.hpp"

namespace gmsd {

namespace {

void require_same_dims(const Image &a, const Image &b, const char *op) {
    if (a.width != b.width || a.height != b.height)
        throw InvalidArgument(std::string(op) + ": dimension mismatch (" +
                              std::to_string(a.width) + "x" + std::to_string(a.height) + " vs " +
                              std::to_string(b.width) + "x" + std::to_string(b.height) + ")");
}

// Runs fn(y0, y1) over disjoint row ranges. Each output pixel is computed
// independently, so the result is bit-identical to the sequential pass.
void parallel_rows(int height, int threads, const std::function<void(int, int)> &fn) {
    if (threads <= 1 || height < 2 * threads) {
        fn(0, height);
        return;
    }
    const int n = std::min(threads, height);
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (int t = 0; t < n; ++t) {
        int y0 = static_cast<int>(static_cast<long long>(height) * t / n);
        int y1 = static_cast<int>(static_cast<long long>(height) * (t + 1) / n);
        pool.emplace_back(fn, y0, y1);
    }
    for (auto &th : pool)
        th.join();
}

// Mean of map values in fixed row-major order; shared by pool_mean and the
// streaming gmsm path so the two agree bit-for-bit.
double mean_of(const SampleBuffer &values) {
    double sum = 0.0;
    for (double v : values)
        sum += v;
    return sum / static_cast<double>(values.size());
}

double std_given_mean(const SampleBuffer &values, double mean) {
    double acc = 0.0;
    for (double v : values) {
        double d = v - mean;
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(values.size()));
}

} // namespace

Image preprocess(const Image &image) {
    if (image.width < 2 || image.height < 2)
        throw InvalidArgument("preprocess: image must be at least 2x2, got " +
                              std::to_string(image.width) + "x" + std::to_string(image.height));
    const int ow = image.width / 2;
    const int oh = image.height / 2;
    Image out = make_image(ow, oh);
    out.dynamic_range = image.dynamic_range;
    for (int y = 0; y < oh; ++y) {
        const double *r0 = image.samples.data() + static_cast<size_t>(2 * y) * image.width;
        const double *r1 = r0 + image.width;
        double *o = out.samples.data() + static_cast<size_t>(y) * ow;
        for (int x = 0; x < ow; ++x)
            o[x] = (r0[2 * x] + r0[2 * x + 1] + r1[2 * x] + r1[2 * x + 1]) * 0.25;
    }
    return out;
}

Map prewitt_magnitude(const Image &image, int threads) {
    if (image.width < 3 || image.height < 3)
        throw InvalidArgument("prewitt_magnitude: image must be at least 3x3, got " +
                              std::to_string(image.width) + "x" + std::to_string(image.height));
    const int w = image.width, h = image.height;
    Map out;
    out.width = w;
    out.height = h;
    out.values.resize(static_cast<size_t>(w) * h);

    // The two Prewitt responses are separable: a 3-tap box sum along one
    // axis followed by a central difference (scaled by 1/3) along the
    // other. One scratch buffer holds the box sums of each phase.
    SampleBuffer sums(static_cast<size_t>(w) * h);

    // Vertical 3-sums (zero rows above and below), then gx^2.
    parallel_rows(h, threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            const double *cur = image.samples.data() + static_cast<size_t>(y) * w;
            const double *up = y > 0 ? cur - w : nullptr;
            const double *dn = y + 1 < h ? cur + w : nullptr;
            double *s = sums.data() + static_cast<size_t>(y) * w;
            for (int x = 0; x < w; ++x)
                s[x] = (up ? up[x] : 0.0) + cur[x] + (dn ? dn[x] : 0.0);
        }
    });
    parallel_rows(h, threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            const double *s = sums.data() + static_cast<size_t>(y) * w;
            double *o = out.values.data() + static_cast<size_t>(y) * w;
            for (int x = 0; x < w; ++x) {
                double gx = ((x > 0 ? s[x - 1] : 0.0) - (x + 1 < w ? s[x + 1] : 0.0)) / 3.0;
                o[x] = gx * gx;
            }
        }
    });

    // Horizontal 3-sums, then gy^2 and the magnitude.
    parallel_rows(h, threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            const double *cur = image.samples.data() + static_cast<size_t>(y) * w;
            double *s = sums.data() + static_cast<size_t>(y) * w;
            for (int x = 0; x < w; ++x)
                s[x] = (x > 0 ? cur[x - 1] : 0.0) + cur[x] + (x + 1 < w ? cur[x + 1] : 0.0);
        }
    });
    parallel_rows(h, threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            const double *above = y > 0 ? sums.data() + static_cast<size_t>(y - 1) * w : nullptr;
            const double *below = y + 1 < h ? sums.data() + static_cast<size_t>(y + 1) * w : nullptr;
            double *o = out.values.data() + static_cast<size_t>(y) * w;
            for (int x = 0; x < w; ++x) {
                double gy = ((above ? above[x] : 0.0) - (below ? below[x] : 0.0)) / 3.0;
                o[x] = std::sqrt(o[x] + gy * gy);
            }
        }
    });
    return out;
}

Map gms_map(const Map &m_ref, const Map &m_dist, double c, int threads) {
    if (m_ref.width != m_dist.width || m_ref.height != m_dist.height)
        throw InvalidArgument("gms_map: dimension mismatch");
    if (!(c > 0.0))
        throw InvalidArgument("gms_map: stability constant must be positive");
    Map out;
    out.width = m_ref.width;
    out.height = m_ref.height;
    out.values.resize(m_ref.pixel_count());
    parallel_rows(out.height, threads, [&](int y0, int y1) {
        const size_t b = static_cast<size_t>(y0) * out.width;
        const size_t e = static_cast<size_t>(y1) * out.width;
        for (size_t i = b; i < e; ++i) {
            double r = m_ref.values[i], d = m_dist.values[i];
            out.values[i] = (2.0 * r * d + c) / (r * r + d * d + c);
        }
    });
    return out;
}

double pool_mean(const Map &map) {
    if (map.values.empty())
        throw InvalidArgument("pool_mean: empty map");
    return mean_of(map.values);
}

double pool_std(const Map &map) {
    if (map.values.empty())
        throw InvalidArgument("pool_std: empty map");
    return std_given_mean(map.values, mean_of(map.values));
}

namespace {

void check_pipeline_inputs(const Image &ref, const Image &dist, const MetricOptions &options) {
    require_same_dims(ref, dist, "gmsd");
    const int min_dim = std::min(ref.width, ref.height);
    if (options.downsample && min_dim < 6)
        throw InvalidArgument("gmsd: image too small for downsampled pipeline (min dimension " +
                              std::to_string(min_dim) + ", need >= 6)");
    if (!options.downsample && min_dim < 3)
        throw InvalidArgument("gmsd: image too small (min dimension " +
                              std::to_string(min_dim) + ", need >= 3)");
    if (!(options.c > 0.0))
        throw InvalidArgument("gmsd: stability constant must be positive");
}

} // namespace

QualityResult compute_gmsd(const Image &ref, const Image &dist, const MetricOptions &options,
                           int threads) {
    check_pipeline_inputs(ref, dist, options);
    Map m_ref, m_dist;
    if (options.downsample) {
        m_ref = prewitt_magnitude(preprocess(ref), threads);
        m_dist = prewitt_magnitude(preprocess(dist), threads);
    } else {
        m_ref = prewitt_magnitude(ref, threads);
        m_dist = prewitt_magnitude(dist, threads);
    }
    Map map = gms_map(m_ref, m_dist, options.c, threads);

    QualityResult result;
    result.gmsm = mean_of(map.values);
    result.gmsd = std_given_mean(map.values, result.gmsm);
    if (options.retain_map)
        result.map = std::move(map);
    return result;
}

double compute_gmsm_only(const Image &ref, const Image &dist, const MetricOptions &options,
                         int threads) {
    check_pipeline_inputs(ref, dist, options);
    Map m_ref, m_dist;
    if (options.downsample) {
        m_ref = prewitt_magnitude(preprocess(ref), threads);
        m_dist = prewitt_magnitude(preprocess(dist), threads);
    } else {
        m_ref = prewitt_magnitude(ref, threads);
        m_dist = prewitt_magnitude(dist, threads);
    }
    const double c = options.c;
    double sum = 0.0;
    const size_t n = m_ref.pixel_count();
    for (size_t i = 0; i < n; ++i) {
        double r = m_ref.values[i], d = m_dist.values[i];
        sum += (2.0 * r * d + c) / (r * r + d * d + c);
    }
    return sum / static_cast<double>(n);
}

Map mse_map(const Image &ref, const Image &dist) {
    require_same_dims(ref, dist, "mse_map");
    Map out;
    out.width = ref.width;
    out.height = ref.height;
    out.values.resize(ref.pixel_count());
    for (size_t i = 0; i < out.values.size(); ++i) {
        double d = ref.samples[i] - dist.samples[i];
        out.values[i] = d * d;
    }
    return out;
}

double mse_sd_index(const Image &ref, const Image &dist) {
    return pool_std(mse_map(ref, dist));
}

double psnr(const Image &ref, const Image &dist) {
    require_same_dims(ref, dist, "psnr");
    double acc = 0.0;
    for (size_t i = 0; i < ref.samples.size(); ++i) {
        double d = ref.samples[i] - dist.samples[i];
        acc += d * d;
    }
    const double mse = acc / static_cast<double>(ref.samples.size());
    if (mse == 0.0)
        return std::numeric_limits<double>::infinity();
    const double L = ref.dynamic_range;
    return 10.0 * std::log10(L * L / mse);
}

} // namespace gmsd
