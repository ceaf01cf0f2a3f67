// Independent reference implementations used only by tests. Everything
// here is written in the most literal way possible (explicit 3x3 loops,
// explicit block means, explicit two-pass statistics, O(n^2) rank
// counting, quadrature for distribution functions) so it shares no code
// path with the library implementations it checks.

#ifndef GMSD_TEST_ORACLES_HPP
#define GMSD_TEST_ORACLES_HPP

#include <cstdint>
#include <vector>

#include "image.hpp"
#include "metrics.hpp"

namespace oracle {

// 2x2 block means, trailing odd row/column dropped.
gmsd::Image preprocess(const gmsd::Image &img);

// Prewitt gradient magnitude by explicit 3x3 cross-correlation with
// zero padding, same-size output.
gmsd::Map prewitt_magnitude(const gmsd::Image &img);

gmsd::Map gms_map(const gmsd::Map &mr, const gmsd::Map &md, double c);

double mean(const std::vector<double> &v);
double population_std(const std::vector<double> &v);

struct PipelineResult {
    gmsd::Map map;
    double gmsm;
    double gmsd;
};

// Full naive pipeline (optional preprocess, gradients, map, pooling).
PipelineResult pipeline(const gmsd::Image &ref, const gmsd::Image &dist, double c,
                        bool downsample);

// Brute-force definitional statistics.
double pearson(const std::vector<double> &a, const std::vector<double> &b);
// Average ranks by O(n^2) counting, then the brute-force Pearson.
double spearman(const std::vector<double> &a, const std::vector<double> &b);
// Eq-style tie-free Spearman: 1 - 6 sum(d^2) / (n (n^2 - 1)).
double spearman_rank_formula(const std::vector<double> &a, const std::vector<double> &b);
double rmse(const std::vector<double> &a, const std::vector<double> &b);

// F-distribution CDF by adaptive Simpson quadrature over the density.
double f_cdf_quadrature(double f, double d1, double d2);

// Deterministic textured test image: seeded uniform noise, Gaussian
// blurred, then rescaled to [0.15, 0.85].
gmsd::Image textured_image(int width, int height, std::uint64_t seed);

} // namespace oracle

#endif
