#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "random.hpp"

namespace oracle {

gmsd::Image preprocess(const gmsd::Image &img) {
    gmsd::Image out = gmsd::make_image(img.width / 2, img.height / 2);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x) {
            double sum = 0.0;
            for (int dy = 0; dy < 2; ++dy)
                for (int dx = 0; dx < 2; ++dx)
                    sum += img.at(2 * x + dx, 2 * y + dy);
            out.at(x, y) = sum / 4.0;
        }
    return out;
}

gmsd::Map prewitt_magnitude(const gmsd::Image &img) {
    static const double hx[3][3] = {{1.0 / 3, 0.0, -1.0 / 3},
                                    {1.0 / 3, 0.0, -1.0 / 3},
                                    {1.0 / 3, 0.0, -1.0 / 3}};
    static const double hy[3][3] = {{1.0 / 3, 1.0 / 3, 1.0 / 3},
                                    {0.0, 0.0, 0.0},
                                    {-1.0 / 3, -1.0 / 3, -1.0 / 3}};
    gmsd::Map out;
    out.width = img.width;
    out.height = img.height;
    out.values.resize(img.pixel_count());
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            double gx = 0.0, gy = 0.0;
            for (int ky = 0; ky < 3; ++ky)
                for (int kx = 0; kx < 3; ++kx) {
                    int sx = x + kx - 1, sy = y + ky - 1;
                    double v = 0.0; // zero padding
                    if (sx >= 0 && sx < img.width && sy >= 0 && sy < img.height)
                        v = img.at(sx, sy);
                    gx += hx[ky][kx] * v;
                    gy += hy[ky][kx] * v;
                }
            out.values[static_cast<size_t>(y) * img.width + x] = std::sqrt(gx * gx + gy * gy);
        }
    return out;
}

gmsd::Map gms_map(const gmsd::Map &mr, const gmsd::Map &md, double c) {
    gmsd::Map out;
    out.width = mr.width;
    out.height = mr.height;
    out.values.resize(mr.pixel_count());
    for (size_t i = 0; i < out.values.size(); ++i) {
        double r = mr.values[i], d = md.values[i];
        out.values[i] = (2.0 * r * d + c) / (r * r + d * d + c);
    }
    return out;
}

double mean(const std::vector<double> &v) {
    double sum = 0.0;
    for (double x : v)
        sum += x;
    return sum / static_cast<double>(v.size());
}

double population_std(const std::vector<double> &v) {
    double m = mean(v);
    double acc = 0.0;
    for (double x : v)
        acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

PipelineResult pipeline(const gmsd::Image &ref, const gmsd::Image &dist, double c,
                        bool downsample) {
    gmsd::Image r = downsample ? oracle::preprocess(ref) : ref;
    gmsd::Image d = downsample ? oracle::preprocess(dist) : dist;
    gmsd::Map mr = oracle::prewitt_magnitude(r);
    gmsd::Map md = oracle::prewitt_magnitude(d);
    PipelineResult result{oracle::gms_map(mr, md, c), 0.0, 0.0};
    std::vector<double> vals(result.map.values.begin(), result.map.values.end());
    result.gmsm = mean(vals);
    result.gmsd = population_std(vals);
    return result;
}

double pearson(const std::vector<double> &a, const std::vector<double> &b) {
    double ma = mean(a), mb = mean(b);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += (a[i] - ma) * (b[i] - mb);
        na += (a[i] - ma) * (a[i] - ma);
        nb += (b[i] - mb) * (b[i] - mb);
    }
    return dot / std::sqrt(na * nb);
}

namespace {

// rank_i = 1 + #smaller + (#equal - 1)/2
std::vector<double> counting_ranks(const std::vector<double> &v) {
    std::vector<double> ranks(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        size_t smaller = 0, equal = 0;
        for (size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i])
                ++smaller;
            else if (v[j] == v[i])
                ++equal;
        }
        ranks[i] = 1.0 + static_cast<double>(smaller) + 0.5 * static_cast<double>(equal - 1);
    }
    return ranks;
}

} // namespace

double spearman(const std::vector<double> &a, const std::vector<double> &b) {
    return pearson(counting_ranks(a), counting_ranks(b));
}

double spearman_rank_formula(const std::vector<double> &a, const std::vector<double> &b) {
    std::vector<double> ra = counting_ranks(a), rb = counting_ranks(b);
    const double n = static_cast<double>(a.size());
    double sum_d2 = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        sum_d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
    return 1.0 - 6.0 * sum_d2 / (n * (n * n - 1.0));
}

double rmse(const std::vector<double> &a, const std::vector<double> &b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc / static_cast<double>(a.size()));
}

namespace {

// Log of the F density, evaluated carefully for large degrees of freedom.
double log_f_density(double x, double d1, double d2) {
    return 0.5 * (d1 * std::log(d1 * x) + d2 * std::log(d2) -
                  (d1 + d2) * std::log(d1 * x + d2)) -
           std::log(x) -
           (std::lgamma(0.5 * d1) + std::lgamma(0.5 * d2) - std::lgamma(0.5 * (d1 + d2)));
}

double f_density(double x, double d1, double d2) {
    if (x <= 0.0)
        return 0.0;
    return std::exp(log_f_density(x, d1, d2));
}

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth, double d1, double d2) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f_density(lm, d1, d2), frm = f_density(rm, d1, d2);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, d1, d2) +
           adaptive_simpson(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, d1, d2);
}

} // namespace

double f_cdf_quadrature(double f, double d1, double d2) {
    if (f <= 0.0)
        return 0.0;
    double fa = f_density(1e-300, d1, d2);
    double fm = f_density(0.5 * f, d1, d2);
    double fb = f_density(f, d1, d2);
    double whole = simpson(0.0, f, fa, fm, fb);
    return adaptive_simpson(0.0, f, fa, fm, fb, whole, 1e-12, 48, d1, d2);
}

gmsd::Image textured_image(int width, int height, std::uint64_t seed) {
    gmsd::Rng rng(seed);
    gmsd::Image noise = gmsd::make_image(width, height);
    for (double &s : noise.samples)
        s = rng.uniform();
    gmsd::Image smooth =
        gmsd::apply_distortion(noise, {gmsd::DistortionKind::GaussianBlur, 1.5, 0});
    auto [lo_it, hi_it] = std::minmax_element(smooth.samples.begin(), smooth.samples.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi <= lo)
        throw std::runtime_error("degenerate texture");
    for (double &s : smooth.samples)
        s = 0.15 + 0.7 * (s - lo) / (hi - lo);
    return smooth;
}

} // namespace oracle
