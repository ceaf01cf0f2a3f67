#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "error.hpp"

namespace gmsd {

namespace {

void require_pair(std::span<const double> a, std::span<const double> b, size_t min_n,
                  const char *op) {
    if (a.size() != b.size())
        throw InvalidArgument(std::string(op) + ": length mismatch (" + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()) + ")");
    if (a.size() < min_n)
        throw InvalidArgument(std::string(op) + ": need at least " + std::to_string(min_n) +
                              " samples, got " + std::to_string(a.size()));
}

bool is_constant(std::span<const double> v) {
    for (double x : v)
        if (x != v.front())
            return false;
    return true;
}

double sample_variance(std::span<const double> v) {
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double acc = 0.0;
    for (double x : v) {
        double d = x - mean;
        acc += d * d;
    }
    return acc / static_cast<double>(v.size() - 1);
}

// Continued fraction for I_x(a,b) evaluated with the modified Lentz
// algorithm (the standard even/odd term pattern).
double incomplete_beta_cf(double x, double a, double b) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    constexpr int max_iter = 1000;

    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::fabs(d) < tiny)
        d = tiny;
    d = 1.0 / d;
    double h = d;

    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 + num * d;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        h *= d * c;

        num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 + num * d;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < eps)
            break;
    }
    return h;
}

} // namespace

std::vector<double> average_ranks(std::span<const double> values) {
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t i, size_t j) { return values[i] < values[j]; });

    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]])
            ++j;
        double rank = 0.5 * static_cast<double>(i + j) + 1.0; // mean of positions i..j, 1-based
        for (size_t k = i; k <= j; ++k)
            ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

double pearson(std::span<const double> q, std::span<const double> s) {
    require_pair(q, s, 2, "pearson");
    if (is_constant(q) || is_constant(s))
        throw InvalidArgument("pearson: correlation undefined for a constant vector");
    const double n = static_cast<double>(q.size());
    double mq = std::accumulate(q.begin(), q.end(), 0.0) / n;
    double ms = std::accumulate(s.begin(), s.end(), 0.0) / n;
    double dot = 0.0, nq = 0.0, ns = 0.0;
    for (size_t i = 0; i < q.size(); ++i) {
        double a = q[i] - mq, b = s[i] - ms;
        dot += a * b;
        nq += a * a;
        ns += b * b;
    }
    return dot / std::sqrt(nq * ns);
}

double spearman(std::span<const double> q, std::span<const double> s) {
    require_pair(q, s, 2, "spearman");
    if (is_constant(q) || is_constant(s))
        throw InvalidArgument("spearman: correlation undefined for a constant vector");
    std::vector<double> rq = average_ranks(q);
    std::vector<double> rs = average_ranks(s);
    return pearson(rq, rs);
}

double rmse(std::span<const double> q, std::span<const double> s) {
    require_pair(q, s, 1, "rmse");
    double acc = 0.0;
    for (size_t i = 0; i < q.size(); ++i) {
        double d = q[i] - s[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(q.size()));
}

double regularized_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw InvalidArgument("regularized_incomplete_beta: a and b must be positive");
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    // Prefactor x^a (1-x)^b / B(a,b) in log space.
    double front = std::exp(a * std::log(x) + b * std::log1p(-x) + std::lgamma(a + b) -
                            std::lgamma(a) - std::lgamma(b));
    // Use the continued fraction on whichever side converges fast.
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * incomplete_beta_cf(x, a, b) / a;
    return 1.0 - front * incomplete_beta_cf(1.0 - x, b, a) / b;
}

double f_cdf(double f, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw InvalidArgument("f_cdf: degrees of freedom must be positive");
    if (f <= 0.0)
        return 0.0;
    double x = d1 * f / (d1 * f + d2);
    return regularized_incomplete_beta(x, 0.5 * d1, 0.5 * d2);
}

int f_test_better(std::span<const double> residuals_a, std::span<const double> residuals_b,
                  double alpha) {
    if (residuals_a.size() < 2 || residuals_b.size() < 2)
        throw InvalidArgument("f_test_better: need at least 2 residuals per side");
    if (!(alpha > 0.0) || alpha > 0.5)
        throw InvalidArgument("f_test_better: alpha must be in (0, 0.5]");
    double va = sample_variance(residuals_a);
    double vb = sample_variance(residuals_b);
    if (va == 0.0 || vb == 0.0)
        throw InvalidArgument("f_test_better: zero-variance residuals");
    double f = va / vb;
    double p = f_cdf(f, static_cast<double>(residuals_a.size() - 1),
                     static_cast<double>(residuals_b.size() - 1));
    return p < alpha ? 1 : 0;
}

double weighted_average(std::span<const double> values, std::span<const double> weights) {
    require_pair(values, weights, 1, "weighted_average");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        if (!(weights[i] > 0.0))
            throw InvalidArgument("weighted_average: weights must be positive");
        num += weights[i] * values[i];
        den += weights[i];
    }
    return num / den;
}

} // namespace gmsd
