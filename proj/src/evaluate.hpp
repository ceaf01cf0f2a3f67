#ifndef GMSD_EVALUATE_HPP
#define GMSD_EVALUATE_HPP

#include <string>
#include <utility>
#include <vector>

#include "logistic.hpp"
#include "manifest.hpp"
#include "metrics.hpp"

namespace gmsd {

enum class Metric { Gmsd, Gmsm, Psnr, MseSd };

enum class GroupBy { None, DistortionType, DatasetId };

// Per-group evaluation: logistic parameters plus the three correspondence
// indices. srocc is computed on raw objective scores, plcc/rmse on the
// fitted ones; both correlations are signed here (negative when the
// metric's polarity opposes the subjective scale).
struct GroupSummary {
    std::string group;
    size_t n = 0;
    double srocc = 0.0;
    double plcc = 0.0;
    double rmse = 0.0;
    LogisticParams params;
    bool fit_fallback = false;
};

// Objective score of a single pair under the selected metric.
double metric_score(const Image &ref, const Image &dist, Metric metric,
                    const MetricOptions &options, int threads = 1);

// Loads every record, scores it, groups, fits and summarizes. Groups are
// returned in lexicographic order; each must have n >= 5. Failures name
// the offending record index (1-based over the manifest's data rows).
std::vector<GroupSummary> evaluate(const std::vector<DatasetRecord> &records, Metric metric,
                                   const MetricOptions &options, GroupBy group_by,
                                   LogisticForm form = LogisticForm::Standard, int threads = 1);

// Spearman correlation of the GMSD index (downsampled pipeline) against
// the subjective scores, once per stability constant, in input order.
// Images are loaded and their gradients computed once per record.
std::vector<std::pair<double, double>> sweep_c(const std::vector<DatasetRecord> &records,
                                               const std::vector<double> &c_values);

} // namespace gmsd

#endif
