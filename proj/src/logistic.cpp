#include "logistic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "error.hpp"
#include "random.hpp"
#include "stats.hpp"

namespace gmsd {

namespace {

// Keeps exp() finite in both forms; 700 is just inside double range.
double clamp_exponent(double t) { return std::min(700.0, std::max(-700.0, t)); }

struct Simplex {
    std::array<double, 5> best_point;
    double best_value;
};

// Nelder-Mead with the standard reflection/expansion/contraction/shrink
// coefficients (1, 2, 0.5, 0.5) and fminsearch-style initial simplex.
Simplex nelder_mead(const std::function<double(const std::array<double, 5> &)> &objective,
                    const std::array<double, 5> &start) {
    constexpr int dim = 5;
    constexpr int max_iter = 10000;
    constexpr double rel_tol = 1e-10;

    std::array<std::array<double, 5>, dim + 1> points;
    std::array<double, dim + 1> values;
    points[0] = start;
    for (int i = 0; i < dim; ++i) {
        points[i + 1] = start;
        points[i + 1][i] = start[i] != 0.0 ? start[i] * 1.05 : 0.00025;
    }
    for (int i = 0; i <= dim; ++i)
        values[i] = objective(points[i]);

    std::array<int, dim + 1> order;
    for (int iter = 0; iter < max_iter; ++iter) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
        const int best = order[0], worst = order[dim], second_worst = order[dim - 1];

        double spread = values[worst] - values[best];
        if (!(spread > rel_tol * (std::fabs(values[best]) + 1e-300)))
            break;
        // Degenerate-simplex stop: all vertices collapsed onto the best.
        double diameter = 0.0;
        for (int i = 1; i <= dim; ++i)
            for (int k = 0; k < dim; ++k)
                diameter = std::max(diameter, std::fabs(points[order[i]][k] - points[best][k]));
        if (diameter < 1e-14 * (1.0 + std::fabs(points[best][0])))
            break;

        std::array<double, 5> centroid{};
        for (int i = 0; i <= dim; ++i)
            if (i != worst)
                for (int k = 0; k < dim; ++k)
                    centroid[k] += points[i][k];
        for (int k = 0; k < dim; ++k)
            centroid[k] /= dim;

        auto blend = [&](double t) {
            std::array<double, 5> p;
            for (int k = 0; k < dim; ++k)
                p[k] = centroid[k] + t * (points[worst][k] - centroid[k]);
            return p;
        };

        std::array<double, 5> reflected = blend(-1.0);
        double f_reflected = objective(reflected);
        if (f_reflected < values[best]) {
            std::array<double, 5> expanded = blend(-2.0);
            double f_expanded = objective(expanded);
            if (f_expanded < f_reflected) {
                points[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                points[worst] = reflected;
                values[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < values[second_worst]) {
            points[worst] = reflected;
            values[worst] = f_reflected;
            continue;
        }
        // Contract toward the better of worst/reflected.
        bool outside = f_reflected < values[worst];
        std::array<double, 5> contracted = blend(outside ? -0.5 : 0.5);
        double f_contracted = objective(contracted);
        if (f_contracted < std::min(f_reflected, values[worst])) {
            points[worst] = contracted;
            values[worst] = f_contracted;
            continue;
        }
        // Shrink everything toward the best vertex.
        for (int i = 0; i <= dim; ++i) {
            if (i == best)
                continue;
            for (int k = 0; k < dim; ++k)
                points[i][k] = points[best][k] + 0.5 * (points[i][k] - points[best][k]);
            values[i] = objective(points[i]);
        }
    }

    int best = 0;
    for (int i = 1; i <= dim; ++i)
        if (values[i] < values[best])
            best = i;
    return {points[best], values[best]};
}

} // namespace

double logistic_apply_one(double q, const LogisticParams &p, LogisticForm form) {
    const double t = clamp_exponent(p.beta[1] * (q - p.beta[2]));
    const double denom = form == LogisticForm::Standard ? 1.0 + std::exp(t) : std::exp(t);
    return p.beta[0] * (0.5 - 1.0 / denom) + p.beta[3] * q + p.beta[4];
}

std::vector<double> logistic_apply(std::span<const double> q, const LogisticParams &params,
                                   LogisticForm form) {
    std::vector<double> out(q.size());
    for (size_t i = 0; i < q.size(); ++i)
        out[i] = logistic_apply_one(q[i], params, form);
    return out;
}

LogisticFit logistic_fit(std::span<const double> q, std::span<const double> s,
                         LogisticForm form) {
    if (q.size() != s.size())
        throw InvalidArgument("logistic_fit: length mismatch");
    if (q.size() < 5)
        throw InvalidArgument("logistic_fit: need at least 5 samples (5 parameters), got " +
                              std::to_string(q.size()));
    const auto [q_min_it, q_max_it] = std::minmax_element(q.begin(), q.end());
    if (*q_min_it == *q_max_it)
        throw InvalidArgument("logistic_fit: objective scores are constant");
    const auto [s_min_it, s_max_it] = std::minmax_element(s.begin(), s.end());

    const double n = static_cast<double>(q.size());
    const double q_mean = std::accumulate(q.begin(), q.end(), 0.0) / n;
    const double s_mean = std::accumulate(s.begin(), s.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < q.size(); ++i) {
        sxx += (q[i] - q_mean) * (q[i] - q_mean);
        sxy += (q[i] - q_mean) * (s[i] - s_mean);
    }
    const double slope = sxy / sxx;
    const double intercept = s_mean - slope * q_mean;

    std::array<double, 5> init{*s_max_it - *s_min_it, 10.0 / (*q_max_it - *q_min_it), q_mean,
                               slope, intercept};

    auto objective = [&](const std::array<double, 5> &beta) {
        LogisticParams p{beta};
        double acc = 0.0;
        for (size_t i = 0; i < q.size(); ++i) {
            double d = logistic_apply_one(q[i], p, form) - s[i];
            acc += d * d;
        }
        // NaN would corrupt the simplex ordering; treat it as divergence.
        return std::isfinite(acc) ? acc : std::numeric_limits<double>::infinity();
    };

    Rng jitter(0x1091571Cu); // fixed so fits are reproducible
    std::array<double, 5> best_point = init;
    double best_value = std::numeric_limits<double>::infinity();
    for (int start = 0; start < 4; ++start) {
        std::array<double, 5> point = init;
        if (start > 0)
            for (double &b : point)
                b = b != 0.0 ? b * (1.0 + 0.1 * jitter.uniform(-1.0, 1.0))
                             : 0.1 * jitter.uniform(-1.0, 1.0);
        Simplex result = nelder_mead(objective, point);
        if (result.best_value < best_value) {
            best_value = result.best_value;
            best_point = result.best_point;
        }
    }

    LogisticFit fit;
    if (!std::isfinite(best_value)) {
        // Every start diverged; fall back to the plain least-squares line.
        fit.params.beta = {0.0, 1.0, 0.0, slope, intercept};
        fit.fallback_linear = true;
    } else {
        fit.params.beta = best_point;
    }
    std::vector<double> fitted = logistic_apply(q, fit.params, form);
    fit.rmse = rmse(fitted, s);
    return fit;
}

} // namespace gmsd
