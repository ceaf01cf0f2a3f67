#ifndef GMSD_LOGISTIC_HPP
#define GMSD_LOGISTIC_HPP

#include <array>
#include <span>
#include <vector>

namespace gmsd {

// The 5-parameter monotone regression curve mapping objective scores onto
// the subjective scale:
//   Standard: Qp = b1 (1/2 - 1/(1 + exp(b2 (q - b3)))) + b4 q + b5
//   Literal:  Qp = b1 (1/2 - 1/exp(b2 (q - b3))) + b4 q + b5
// The literal variant is unbounded for large negative exponents and is
// kept only for comparison; Standard is the default everywhere.
enum class LogisticForm { Standard, Literal };

struct LogisticParams {
    std::array<double, 5> beta{0.0, 1.0, 0.0, 1.0, 0.0};
};

double logistic_apply_one(double q, const LogisticParams &params,
                          LogisticForm form = LogisticForm::Standard);

std::vector<double> logistic_apply(std::span<const double> q, const LogisticParams &params,
                                   LogisticForm form = LogisticForm::Standard);

struct LogisticFit {
    LogisticParams params;
    double rmse = 0.0;           // of the fitted curve against s
    bool fallback_linear = false; // true when every start produced a non-finite objective
};

// Least-squares fit by Nelder-Mead simplex descent, restarted from the
// deterministic initialization plus three seeded jitters of it; the best
// result is kept. Initialization: b1 = max(s)-min(s),
// b2 = 10/(max(q)-min(q)), b3 = mean(q), b4/b5 = least-squares line s~q.
// Convergence: relative objective spread < 1e-10 or 10,000 iterations.
// Requires n >= 5 and q non-constant.
LogisticFit logistic_fit(std::span<const double> q, std::span<const double> s,
                         LogisticForm form = LogisticForm::Standard);

} // namespace gmsd

#endif
