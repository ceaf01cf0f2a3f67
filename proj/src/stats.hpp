#ifndef GMSD_STATS_HPP
#define GMSD_STATS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace gmsd {

// Average ranks (1-based; ties share the mean of their positions).
std::vector<double> average_ranks(std::span<const double> values);

// Tie-aware Spearman rank correlation: Pearson correlation of average
// ranks. Reduces to 1 - 6*sum(d^2)/(n(n^2-1)) when there are no ties.
// Requires equal lengths, n >= 2, both vectors non-constant.
double spearman(std::span<const double> q, std::span<const double> s);

// Pearson linear correlation of mean-removed vectors.
double pearson(std::span<const double> q, std::span<const double> s);

// sqrt(sum((q_i - s_i)^2) / n), n >= 1.
double rmse(std::span<const double> q, std::span<const double> s);

// Regularized incomplete beta I_x(a, b) by Lentz continued fraction;
// relative accuracy around 1e-14 for moderate a, b.
double regularized_incomplete_beta(double x, double a, double b);

// CDF of the F distribution with (d1, d2) degrees of freedom.
double f_cdf(double f, double d1, double d2);

// Left-tailed F-test on two residual vectors: returns 1 iff
// var(a)/var(b) (sample variances, divisor n-1) is below the left-tail
// critical value at level alpha, i.e. a's residual variance is
// significantly smaller. alpha in (0, 0.5]; both n >= 2; variances must
// be nonzero.
int f_test_better(std::span<const double> residuals_a, std::span<const double> residuals_b,
                  double alpha);

// Weight-normalized mean; weights positive, non-empty.
double weighted_average(std::span<const double> values, std::span<const double> weights);

} // namespace gmsd

#endif
