#include "gmsd.h"

#include <cmath>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "bench.hpp"
#include "error.hpp"
#include "evaluate.hpp"
#include "image.hpp"
#include "logistic.hpp"
#include "manifest.hpp"
#include "metrics.hpp"
#include "stats.hpp"

using json = nlohmann::ordered_json;

struct gmsd_image {
    gmsd::Image impl;
};

namespace {

thread_local std::string t_last_error;

gmsd_status fail(gmsd_status status, const std::string &message) {
    t_last_error = message;
    return status;
}

// Every entry point funnels through here so exceptions never cross the
// C boundary.
template <class Fn>
gmsd_status guarded(Fn &&fn) {
    try {
        return fn();
    } catch (const gmsd::IoError &e) {
        return fail(GMSD_ERR_IO, e.what());
    } catch (const gmsd::InvalidArgument &e) {
        return fail(GMSD_ERR_INVALID, e.what());
    } catch (const std::bad_alloc &) {
        return fail(GMSD_ERR_NOMEM, "out of memory");
    } catch (const std::exception &e) {
        return fail(GMSD_ERR_INTERNAL, e.what());
    }
}

gmsd_status require_args(bool ok) {
    if (!ok)
        throw gmsd::InvalidArgument("null argument");
    return GMSD_OK;
}

gmsd_image *wrap(gmsd::Image &&img) { return new gmsd_image{std::move(img)}; }

gmsd::MetricOptions to_options(const gmsd_options *options) {
    gmsd::MetricOptions out;
    if (options) {
        out.c = options->c;
        out.downsample = options->downsample != 0;
    }
    return out;
}

int option_threads(const gmsd_options *options) {
    return options && options->threads > 1 ? options->threads : 1;
}

gmsd::Metric to_metric(gmsd_metric metric) {
    switch (metric) {
    case GMSD_METRIC_GMSD:
        return gmsd::Metric::Gmsd;
    case GMSD_METRIC_GMSM:
        return gmsd::Metric::Gmsm;
    case GMSD_METRIC_PSNR:
        return gmsd::Metric::Psnr;
    case GMSD_METRIC_MSE_SD:
        return gmsd::Metric::MseSd;
    }
    throw gmsd::InvalidArgument("unknown metric selector");
}

gmsd::LogisticForm to_form(gmsd_logistic_form form) {
    switch (form) {
    case GMSD_LOGISTIC_STANDARD:
        return gmsd::LogisticForm::Standard;
    case GMSD_LOGISTIC_LITERAL:
        return gmsd::LogisticForm::Literal;
    }
    throw gmsd::InvalidArgument("unknown logistic form");
}

const char *metric_name(gmsd::Metric metric) {
    switch (metric) {
    case gmsd::Metric::Gmsd:
        return "gmsd";
    case gmsd::Metric::Gmsm:
        return "gmsm";
    case gmsd::Metric::Psnr:
        return "psnr";
    case gmsd::Metric::MseSd:
        return "mse-sd";
    }
    return "?";
}

char *dup_string(const std::string &s) {
    char *out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// Correlations are displayed as absolute values; the sign is carried as a
// polarity tag ("inverted" when the raw correlation was negative).
json summary_to_json(const gmsd::GroupSummary &summary) {
    json j;
    j["group"] = summary.group;
    j["n"] = summary.n;
    j["srocc"] = std::fabs(summary.srocc);
    j["plcc"] = std::fabs(summary.plcc);
    j["rmse"] = summary.rmse;
    j["beta"] = summary.params.beta;
    j["polarity"] = summary.srocc < 0.0 ? "inverted" : "direct";
    j["fit_fallback"] = summary.fit_fallback;
    return j;
}

} // namespace

extern "C" {

const char *gmsd_version(void) { return "1.0.0"; }

const char *gmsd_status_name(gmsd_status status) {
    switch (status) {
    case GMSD_OK:
        return "ok";
    case GMSD_ERR_IO:
        return "io error";
    case GMSD_ERR_INVALID:
        return "invalid argument";
    case GMSD_ERR_NOMEM:
        return "out of memory";
    case GMSD_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

const char *gmsd_last_error(void) { return t_last_error.c_str(); }

gmsd_status gmsd_image_load(const char *path, gmsd_image **out) {
    return guarded([&] {
        require_args(path && out);
        *out = wrap(gmsd::load_image(path));
        return GMSD_OK;
    });
}

gmsd_status gmsd_image_create(int32_t width, int32_t height, const double *samples,
                              gmsd_image **out) {
    return guarded([&] {
        require_args(samples && out);
        if (width < 1 || height < 1)
            throw gmsd::InvalidArgument("image dimensions must be positive");
        gmsd::Image img = gmsd::make_image(width, height);
        const size_t n = img.pixel_count();
        for (size_t i = 0; i < n; ++i) {
            if (!(samples[i] >= 0.0 && samples[i] <= 1.0))
                throw gmsd::InvalidArgument("sample " + std::to_string(i) +
                                            " outside [0, 1]");
            img.samples[i] = samples[i];
        }
        *out = wrap(std::move(img));
        return GMSD_OK;
    });
}

gmsd_status gmsd_image_save_pgm(const gmsd_image *image, const char *path) {
    return guarded([&] {
        require_args(image && path);
        gmsd::save_gray(image->impl, path);
        return GMSD_OK;
    });
}

void gmsd_image_free(gmsd_image *image) { delete image; }

int32_t gmsd_image_width(const gmsd_image *image) { return image ? image->impl.width : 0; }

int32_t gmsd_image_height(const gmsd_image *image) { return image ? image->impl.height : 0; }

const double *gmsd_image_samples(const gmsd_image *image) {
    return image ? image->impl.samples.data() : nullptr;
}

gmsd_status gmsd_image_distort(const gmsd_image *input, gmsd_distortion kind, double level,
                               uint64_t seed, gmsd_image **out) {
    return guarded([&] {
        require_args(input && out);
        gmsd::DistortionSpec spec;
        switch (kind) {
        case GMSD_DISTORT_AWN:
            spec.kind = gmsd::DistortionKind::AdditiveWhiteNoise;
            break;
        case GMSD_DISTORT_GAUSSIAN_BLUR:
            spec.kind = gmsd::DistortionKind::GaussianBlur;
            break;
        case GMSD_DISTORT_CONTRAST:
            spec.kind = gmsd::DistortionKind::ContrastScale;
            break;
        default:
            throw gmsd::InvalidArgument("unknown distortion kind");
        }
        spec.level = level;
        spec.seed = seed;
        *out = wrap(gmsd::apply_distortion(input->impl, spec));
        return GMSD_OK;
    });
}

void gmsd_options_init(gmsd_options *options) {
    if (!options)
        return;
    options->c = 0.0026;
    options->downsample = 1;
    options->threads = 1;
}

gmsd_status gmsd_compute(const gmsd_image *ref, const gmsd_image *dist,
                         const gmsd_options *options, gmsd_score *out, gmsd_image **map_out) {
    return guarded([&] {
        require_args(ref && dist && out);
        gmsd::MetricOptions opt = to_options(options);
        opt.retain_map = map_out != nullptr;
        gmsd::QualityResult result =
            gmsd::compute_gmsd(ref->impl, dist->impl, opt, option_threads(options));
        out->gmsd = result.gmsd;
        out->gmsm = result.gmsm;
        if (map_out) {
            gmsd::Image map_img;
            map_img.width = result.map->width;
            map_img.height = result.map->height;
            map_img.samples = std::move(result.map->values);
            *map_out = wrap(std::move(map_img));
        }
        return GMSD_OK;
    });
}

gmsd_status gmsd_psnr(const gmsd_image *ref, const gmsd_image *dist, double *out_db) {
    return guarded([&] {
        require_args(ref && dist && out_db);
        *out_db = gmsd::psnr(ref->impl, dist->impl);
        return GMSD_OK;
    });
}

gmsd_status gmsd_mse_sd(const gmsd_image *ref, const gmsd_image *dist, double *out) {
    return guarded([&] {
        require_args(ref && dist && out);
        *out = gmsd::mse_sd_index(ref->impl, dist->impl);
        return GMSD_OK;
    });
}

gmsd_status gmsd_spearman(const double *q, const double *s, size_t n, double *out) {
    return guarded([&] {
        require_args(q && s && out);
        *out = gmsd::spearman({q, n}, {s, n});
        return GMSD_OK;
    });
}

gmsd_status gmsd_pearson(const double *q, const double *s, size_t n, double *out) {
    return guarded([&] {
        require_args(q && s && out);
        *out = gmsd::pearson({q, n}, {s, n});
        return GMSD_OK;
    });
}

gmsd_status gmsd_rmse(const double *q, const double *s, size_t n, double *out) {
    return guarded([&] {
        require_args(q && s && out);
        *out = gmsd::rmse({q, n}, {s, n});
        return GMSD_OK;
    });
}

gmsd_status gmsd_logistic_apply(const double *q, size_t n, const double beta[5],
                                gmsd_logistic_form form, double *out) {
    return guarded([&] {
        require_args(q && beta && out);
        gmsd::LogisticParams params;
        for (int i = 0; i < 5; ++i)
            params.beta[i] = beta[i];
        for (size_t i = 0; i < n; ++i)
            out[i] = gmsd::logistic_apply_one(q[i], params, to_form(form));
        return GMSD_OK;
    });
}

gmsd_status gmsd_logistic_fit(const double *q, const double *s, size_t n,
                              gmsd_logistic_form form, double beta_out[5]) {
    return guarded([&] {
        require_args(q && s && beta_out);
        gmsd::LogisticFit fit = gmsd::logistic_fit({q, n}, {s, n}, to_form(form));
        for (int i = 0; i < 5; ++i)
            beta_out[i] = fit.params.beta[i];
        return GMSD_OK;
    });
}

gmsd_status gmsd_f_test_better(const double *residuals_a, size_t n_a, const double *residuals_b,
                               size_t n_b, double alpha, int *h_out) {
    return guarded([&] {
        require_args(residuals_a && residuals_b && h_out);
        *h_out = gmsd::f_test_better({residuals_a, n_a}, {residuals_b, n_b}, alpha);
        return GMSD_OK;
    });
}

gmsd_status gmsd_weighted_average(const double *values, const double *weights, size_t n,
                                  double *out) {
    return guarded([&] {
        require_args(values && weights && out);
        *out = gmsd::weighted_average({values, n}, {weights, n});
        return GMSD_OK;
    });
}

gmsd_status gmsd_evaluate_manifest(const char *manifest_path, gmsd_metric metric,
                                   const gmsd_options *options, gmsd_group_by group_by,
                                   gmsd_logistic_form form, char **json_out) {
    return guarded([&] {
        require_args(manifest_path && json_out);
        gmsd::GroupBy gb;
        switch (group_by) {
        case GMSD_GROUP_NONE:
            gb = gmsd::GroupBy::None;
            break;
        case GMSD_GROUP_DISTORTION:
            gb = gmsd::GroupBy::DistortionType;
            break;
        case GMSD_GROUP_DATASET:
            gb = gmsd::GroupBy::DatasetId;
            break;
        default:
            throw gmsd::InvalidArgument("unknown group-by selector");
        }
        auto records = gmsd::load_manifest(manifest_path);
        auto summaries = gmsd::evaluate(records, to_metric(metric), to_options(options), gb,
                                        to_form(form), option_threads(options));
        json report = json::array();
        for (const auto &summary : summaries)
            report.push_back(summary_to_json(summary));
        *json_out = dup_string(report.dump());
        return GMSD_OK;
    });
}

gmsd_status gmsd_sweep(const char *manifest_path, const double *c_values, size_t n_values,
                       char **json_out) {
    return guarded([&] {
        require_args(manifest_path && c_values && json_out);
        if (n_values == 0)
            throw gmsd::InvalidArgument("gmsd_sweep: no c values given");
        auto records = gmsd::load_manifest(manifest_path);
        auto curve = gmsd::sweep_c(records, {c_values, c_values + n_values});
        json report = json::array();
        for (const auto &[c, srocc] : curve) {
            json row;
            row["c"] = c;
            row["srocc"] = std::fabs(srocc);
            row["polarity"] = srocc < 0.0 ? "inverted" : "direct";
            report.push_back(row);
        }
        *json_out = dup_string(report.dump());
        return GMSD_OK;
    });
}

gmsd_status gmsd_bench(gmsd_metric metric, const int32_t *widths, const int32_t *heights,
                       size_t n_sizes, int repeats, uint64_t seed, int parallel,
                       char **json_out) {
    return guarded([&] {
        require_args(widths && heights && json_out);
        std::vector<std::pair<int, int>> sizes;
        sizes.reserve(n_sizes);
        for (size_t i = 0; i < n_sizes; ++i)
            sizes.emplace_back(widths[i], heights[i]);
        gmsd::BenchReport report =
            gmsd::bench_metric(to_metric(metric), sizes, repeats, seed, parallel != 0);

        json j;
        j["metric"] = metric_name(report.metric);
        j["repeats"] = report.repeats;
        j["seed"] = report.seed;
        j["parallel_threads"] = report.parallel_threads;
        if (report.metric == gmsd::Metric::Gmsd)
            j["ops_per_pixel"] = {{"mul", 19}, {"add", 16}}; // theoretical budget
        j["aux_samples_per_pixel"] = report.aux_samples_per_pixel;
        json sizes_json = json::array();
        for (const auto &entry : report.entries) {
            json e;
            e["width"] = entry.width;
            e["height"] = entry.height;
            e["pixels"] = entry.pixels;
            e["seconds"] = entry.seconds;
            e["batch"] = entry.batch;
            if (report.parallel_threads > 0)
                e["seconds_parallel"] = entry.seconds_parallel;
            sizes_json.push_back(e);
        }
        j["sizes"] = sizes_json;
        if (std::isfinite(report.scaling_exponent))
            j["scaling_exponent"] = report.scaling_exponent;
        else
            j["scaling_exponent"] = nullptr;
        if (report.parallel_threads > 0 && std::isfinite(report.scaling_exponent_parallel))
            j["scaling_exponent_parallel"] = report.scaling_exponent_parallel;
        *json_out = dup_string(j.dump());
        return GMSD_OK;
    });
}

void gmsd_string_free(char *s) { delete[] s; }

} // extern "C"
