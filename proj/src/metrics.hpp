#ifndef GMSD_METRICS_HPP
#define GMSD_METRICS_HPP

#include <optional>

#include "image.hpp"

namespace gmsd {

// Per-pixel map (gradient magnitudes, similarity values, squared errors).
struct Map {
    int width = 0;
    int height = 0;
    SampleBuffer values;

    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

struct MetricOptions {
    double c = 0.0026;      // stability constant for samples in [0, 1]
    bool downsample = true; // 2x2 average filter + factor-2 downsample
    bool retain_map = false;
};

struct QualityResult {
    double gmsd = 0.0; // population std of the similarity map, in [0, 0.5]
    double gmsm = 0.0; // mean of the similarity map, in (0, 1]
    std::optional<Map> map;
};

// 2x2 average filter followed by factor-2 downsampling, implemented as
// non-overlapping block means; a trailing odd row/column is dropped.
// Requires width >= 2 and height >= 2.
Image preprocess(const Image &image);

// Gradient magnitude sqrt(gx^2 + gy^2) from 3x3 Prewitt cross-correlation
// (coefficients +-1/3). Borders are zero-padded and the output has the
// input's dimensions, so border magnitudes are attenuated; they are
// nevertheless included in pooling, which matters on small images.
// Requires width >= 3 and height >= 3.
Map prewitt_magnitude(const Image &image, int threads = 1);

// Pixel-wise similarity (2 mr md + c) / (mr^2 + md^2 + c); values are in
// (0, 1] by construction for c > 0.
Map gms_map(const Map &m_ref, const Map &m_dist, double c, int threads = 1);

// Arithmetic mean over all pixels.
double pool_mean(const Map &map);

// Population standard deviation (divisor N), two-pass.
double pool_std(const Map &map);

// Full pipeline: optional preprocess on both images, Prewitt magnitudes,
// similarity map, then deviation (gmsd) and mean (gmsm) pooling. The
// images must have identical dimensions, with min(width, height) >= 6
// when downsampling (>= 3 otherwise). Symmetric in (ref, dist).
QualityResult compute_gmsd(const Image &ref, const Image &dist,
                           const MetricOptions &options = {}, int threads = 1);

// Mean pooling only, without materializing the similarity map; returns
// bit-identical gmsm to compute_gmsd with the same options.
double compute_gmsm_only(const Image &ref, const Image &dist,
                         const MetricOptions &options = {}, int threads = 1);

// Per-pixel squared difference (ref - dist)^2; no preprocessing.
Map mse_map(const Image &ref, const Image &dist);

// Population standard deviation of the squared-difference map.
double mse_sd_index(const Image &ref, const Image &dist);

// 10*log10(L^2 / MSE) with L = ref.dynamic_range; +infinity when MSE = 0
// (identical images are a legitimate input). No preprocessing.
double psnr(const Image &ref, const Image &dist);

} // namespace gmsd

#endif
