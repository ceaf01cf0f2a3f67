#include "evaluate.hpp"

#include <map>

#include "error.hpp"
#include "stats.hpp"

namespace gmsd {

namespace {

// References repeat heavily in real databases; cache them by path.
class RefCache {
public:
    const Image &get(const std::string &path) {
        auto it = cache_.find(path);
        if (it == cache_.end())
            it = cache_.emplace(path, load_image(path)).first;
        return it->second;
    }

private:
    std::map<std::string, Image> cache_;
};

std::vector<double> score_records(const std::vector<DatasetRecord> &records, Metric metric,
                                  const MetricOptions &options, int threads) {
    RefCache refs;
    std::vector<double> scores(records.size());
    for (size_t i = 0; i < records.size(); ++i) {
        const DatasetRecord &rec = records[i];
        try {
            const Image &ref = refs.get(rec.ref_path);
            Image dist = load_image(rec.dist_path);
            scores[i] = metric_score(ref, dist, metric, options, threads);
        } catch (const IoError &e) {
            throw IoError("record " + std::to_string(i + 1) + ": " + e.what());
        } catch (const InvalidArgument &e) {
            throw InvalidArgument("record " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return scores;
}

const std::string &group_key(const DatasetRecord &rec, GroupBy group_by) {
    static const std::string all = "all";
    switch (group_by) {
    case GroupBy::DistortionType:
        return rec.distortion_type;
    case GroupBy::DatasetId:
        return rec.dataset_id;
    case GroupBy::None:
    default:
        return all;
    }
}

} // namespace

double metric_score(const Image &ref, const Image &dist, Metric metric,
                    const MetricOptions &options, int threads) {
    switch (metric) {
    case Metric::Gmsd:
        return compute_gmsd(ref, dist, options, threads).gmsd;
    case Metric::Gmsm:
        return compute_gmsm_only(ref, dist, options, threads);
    case Metric::Psnr:
        return psnr(ref, dist);
    case Metric::MseSd:
        return mse_sd_index(ref, dist);
    }
    throw InvalidArgument("metric_score: unknown metric");
}

std::vector<GroupSummary> evaluate(const std::vector<DatasetRecord> &records, Metric metric,
                                   const MetricOptions &options, GroupBy group_by,
                                   LogisticForm form, int threads) {
    if (records.empty())
        throw InvalidArgument("evaluate: empty manifest");
    std::vector<double> scores = score_records(records, metric, options, threads);

    // std::map keeps groups in lexicographic order.
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (size_t i = 0; i < records.size(); ++i) {
        auto &bucket = groups[group_key(records[i], group_by)];
        bucket.first.push_back(scores[i]);
        bucket.second.push_back(records[i].subjective);
    }

    std::vector<GroupSummary> summaries;
    summaries.reserve(groups.size());
    for (auto &[name, qs] : groups) {
        auto &[q, s] = qs;
        if (q.size() < 5)
            throw InvalidArgument("evaluate: group '" + name + "' too small (n = " +
                                  std::to_string(q.size()) + ", need >= 5)");
        GroupSummary summary;
        summary.group = name;
        summary.n = q.size();
        summary.srocc = spearman(q, s);
        LogisticFit fit = logistic_fit(q, s, form);
        std::vector<double> fitted = logistic_apply(q, fit.params, form);
        summary.plcc = pearson(fitted, s);
        summary.rmse = rmse(fitted, s);
        summary.params = fit.params;
        summary.fit_fallback = fit.fallback_linear;
        summaries.push_back(std::move(summary));
    }
    return summaries;
}

std::vector<std::pair<double, double>> sweep_c(const std::vector<DatasetRecord> &records,
                                               const std::vector<double> &c_values) {
    if (records.empty())
        throw InvalidArgument("sweep_c: empty manifest");
    for (double c : c_values)
        if (!(c > 0.0))
            throw InvalidArgument("sweep_c: stability constants must be positive");

    // Gradient magnitudes do not depend on c, so compute them once per
    // record and redo only the map and pooling per swept value.
    std::vector<std::vector<double>> scores(c_values.size(),
                                            std::vector<double>(records.size()));
    std::vector<double> subjective(records.size());
    RefCache refs;
    for (size_t i = 0; i < records.size(); ++i) {
        const DatasetRecord &rec = records[i];
        try {
            const Image &ref = refs.get(rec.ref_path);
            Image dist = load_image(rec.dist_path);
            Map m_ref = prewitt_magnitude(preprocess(ref));
            Map m_dist = prewitt_magnitude(preprocess(dist));
            for (size_t ci = 0; ci < c_values.size(); ++ci)
                scores[ci][i] = pool_std(gms_map(m_ref, m_dist, c_values[ci]));
        } catch (const IoError &e) {
            throw IoError("record " + std::to_string(i + 1) + ": " + e.what());
        } catch (const InvalidArgument &e) {
            throw InvalidArgument("record " + std::to_string(i + 1) + ": " + e.what());
        }
        subjective[i] = rec.subjective;
    }

    std::vector<std::pair<double, double>> result;
    result.reserve(c_values.size());
    for (size_t ci = 0; ci < c_values.size(); ++ci)
        result.emplace_back(c_values[ci], spearman(scores[ci], subjective));
    return result;
}

} // namespace gmsd
