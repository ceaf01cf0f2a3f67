// Command-line front end for libgmsd. Everything goes through the public
// C API in gmsd.h.
//
// Exit codes: 0 success, 2 I/O error, 3 validation error (bad flags,
// dimension mismatch, malformed input).

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmsd.h"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;

int status_to_exit(gmsd_status status) {
    switch (status) {
    case GMSD_OK:
        return kExitOk;
    case GMSD_ERR_IO:
        return kExitIo;
    case GMSD_ERR_INVALID:
        return kExitValidation;
    default:
        return 1;
    }
}

int fail_status(gmsd_status status) {
    std::cerr << "gmsd: " << gmsd_last_error() << "\n";
    return status_to_exit(status);
}

int fail_usage(const std::string &message) {
    std::cerr << "gmsd: " << message << "\n";
    return kExitValidation;
}

struct ImageDeleter {
    void operator()(gmsd_image *p) const { gmsd_image_free(p); }
};
using ImagePtr = std::unique_ptr<gmsd_image, ImageDeleter>;

struct StringDeleter {
    void operator()(char *p) const { gmsd_string_free(p); }
};
using JsonPtr = std::unique_ptr<char, StringDeleter>;

std::string format_score(double value) {
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

bool parse_metric(const std::string &name, gmsd_metric *out) {
    if (name == "gmsd")
        *out = GMSD_METRIC_GMSD;
    else if (name == "gmsm")
        *out = GMSD_METRIC_GMSM;
    else if (name == "psnr")
        *out = GMSD_METRIC_PSNR;
    else if (name == "mse-sd")
        *out = GMSD_METRIC_MSE_SD;
    else
        return false;
    return true;
}

// --- score -----------------------------------------------------------

struct ScoreArgs {
    std::string ref, dist;
    std::string metric = "gmsd";
    double c = 0.0026;
    bool no_downsample = false;
    std::string dump_map;
    bool json_mode = false;
};

int run_score(const ScoreArgs &args) {
    gmsd_metric metric;
    if (!parse_metric(args.metric, &metric))
        return fail_usage("unknown metric '" + args.metric + "'");
    if (!(args.c > 0.0))
        return fail_usage("--c must be positive");
    const bool gms_family = metric == GMSD_METRIC_GMSD || metric == GMSD_METRIC_GMSM;
    if (!args.dump_map.empty() && !gms_family)
        return fail_usage("--dump-map requires --metric gmsd or gmsm");

    gmsd_image *raw = nullptr;
    gmsd_status st = gmsd_image_load(args.ref.c_str(), &raw);
    if (st != GMSD_OK)
        return fail_status(st);
    ImagePtr ref(raw);
    st = gmsd_image_load(args.dist.c_str(), &raw);
    if (st != GMSD_OK)
        return fail_status(st);
    ImagePtr dist(raw);

    gmsd_options options;
    gmsd_options_init(&options);
    options.c = args.c;
    options.downsample = args.no_downsample ? 0 : 1;

    double value = 0.0;
    if (gms_family) {
        gmsd_score score;
        gmsd_image *map_raw = nullptr;
        st = gmsd_compute(ref.get(), dist.get(), &options, &score,
                          args.dump_map.empty() ? nullptr : &map_raw);
        if (st != GMSD_OK)
            return fail_status(st);
        ImagePtr map(map_raw);
        value = metric == GMSD_METRIC_GMSD ? score.gmsd : score.gmsm;
        if (map) {
            st = gmsd_image_save_pgm(map.get(), args.dump_map.c_str());
            if (st != GMSD_OK)
                return fail_status(st);
        }
    } else if (metric == GMSD_METRIC_PSNR) {
        st = gmsd_psnr(ref.get(), dist.get(), &value);
        if (st != GMSD_OK)
            return fail_status(st);
    } else {
        st = gmsd_mse_sd(ref.get(), dist.get(), &value);
        if (st != GMSD_OK)
            return fail_status(st);
    }

    if (args.json_mode) {
        json j;
        j["metric"] = args.metric;
        j["ref"] = args.ref;
        j["dist"] = args.dist;
        j["value"] = std::isinf(value) ? json() : json(value);
        j["infinite"] = static_cast<bool>(std::isinf(value));
        j["c"] = args.c;
        j["downsample"] = !args.no_downsample;
        if (!args.dump_map.empty())
            j["map"] = args.dump_map;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << format_score(value) << "\n";
    }
    return kExitOk;
}

// --- evaluate ----------------------------------------------------------

struct EvaluateArgs {
    std::string manifest;
    std::string metric = "gmsd";
    std::string group_by = "none";
    std::string logistic = "standard";
    bool json_mode = false;
};

int run_evaluate(const EvaluateArgs &args) {
    gmsd_metric metric;
    if (!parse_metric(args.metric, &metric))
        return fail_usage("unknown metric '" + args.metric + "'");
    gmsd_group_by group_by;
    if (args.group_by == "none")
        group_by = GMSD_GROUP_NONE;
    else if (args.group_by == "distortion")
        group_by = GMSD_GROUP_DISTORTION;
    else if (args.group_by == "dataset")
        group_by = GMSD_GROUP_DATASET;
    else
        return fail_usage("unknown --group-by '" + args.group_by + "'");
    gmsd_logistic_form form;
    if (args.logistic == "standard")
        form = GMSD_LOGISTIC_STANDARD;
    else if (args.logistic == "literal")
        form = GMSD_LOGISTIC_LITERAL;
    else
        return fail_usage("unknown --logistic '" + args.logistic + "'");

    gmsd_options options;
    gmsd_options_init(&options);
    char *raw = nullptr;
    gmsd_status st =
        gmsd_evaluate_manifest(args.manifest.c_str(), metric, &options, group_by, form, &raw);
    if (st != GMSD_OK)
        return fail_status(st);
    JsonPtr report(raw);

    if (args.json_mode) {
        std::cout << report.get() << "\n";
        return kExitOk;
    }
    json rows = json::parse(report.get());
    size_t group_width = 5;
    for (const auto &row : rows)
        group_width = std::max(group_width, row["group"].get<std::string>().size());
    std::printf("%-*s %6s %10s %10s %12s  %s\n", static_cast<int>(group_width), "group", "n",
                "srocc", "plcc", "rmse", "polarity");
    for (const auto &row : rows) {
        std::printf("%-*s %6zu %10.6f %10.6f %12.6f  %s%s\n", static_cast<int>(group_width),
                    row["group"].get<std::string>().c_str(), row["n"].get<size_t>(),
                    row["srocc"].get<double>(), row["plcc"].get<double>(),
                    row["rmse"].get<double>(), row["polarity"].get<std::string>().c_str(),
                    row["fit_fallback"].get<bool>() ? " (fit fallback)" : "");
    }
    return kExitOk;
}

// --- distort -----------------------------------------------------------

struct DistortArgs {
    std::string input;
    std::string kind;
    double level = 0.0;
    std::uint64_t seed = 0;
    std::string out;
};

int run_distort(const DistortArgs &args) {
    gmsd_distortion kind;
    if (args.kind == "awn")
        kind = GMSD_DISTORT_AWN;
    else if (args.kind == "blur")
        kind = GMSD_DISTORT_GAUSSIAN_BLUR;
    else if (args.kind == "contrast")
        kind = GMSD_DISTORT_CONTRAST;
    else
        return fail_usage("unknown --kind '" + args.kind + "'");

    gmsd_image *raw = nullptr;
    gmsd_status st = gmsd_image_load(args.input.c_str(), &raw);
    if (st != GMSD_OK)
        return fail_status(st);
    ImagePtr input(raw);
    st = gmsd_image_distort(input.get(), kind, args.level, args.seed, &raw);
    if (st != GMSD_OK)
        return fail_status(st);
    ImagePtr distorted(raw);
    st = gmsd_image_save_pgm(distorted.get(), args.out.c_str());
    if (st != GMSD_OK)
        return fail_status(st);
    return kExitOk;
}

// --- sweep -------------------------------------------------------------

struct SweepArgs {
    std::string manifest;
    double c_min = 0.0;
    double c_max = 0.0;
    int steps = 0;
    bool log_scale = false;
    bool json_mode = false;
};

int run_sweep(const SweepArgs &args) {
    if (args.steps < 2)
        return fail_usage("--steps must be >= 2");
    if (!(args.c_min > 0.0) || !(args.c_min < args.c_max))
        return fail_usage("need 0 < --c-min < --c-max");

    std::vector<double> c_values(static_cast<size_t>(args.steps));
    for (int i = 0; i < args.steps; ++i) {
        double t = static_cast<double>(i) / (args.steps - 1);
        c_values[i] = args.log_scale
                          ? std::exp(std::log(args.c_min) +
                                     t * (std::log(args.c_max) - std::log(args.c_min)))
                          : args.c_min + t * (args.c_max - args.c_min);
    }

    char *raw = nullptr;
    gmsd_status st = gmsd_sweep(args.manifest.c_str(), c_values.data(), c_values.size(), &raw);
    if (st != GMSD_OK)
        return fail_status(st);
    JsonPtr report(raw);

    if (args.json_mode) {
        std::cout << report.get() << "\n";
        return kExitOk;
    }
    std::cout << "c,srocc,polarity\n";
    for (const auto &row : json::parse(report.get()))
        std::printf("%.10g,%.6f,%s\n", row["c"].get<double>(), row["srocc"].get<double>(),
                    row["polarity"].get<std::string>().c_str());
    return kExitOk;
}

// --- bench -------------------------------------------------------------

struct BenchArgs {
    std::string sizes = "256,512,1024";
    int repeats = 9;
    bool parallel = false;
    std::string csv_path;
    bool json_mode = false;
};

bool parse_sizes(const std::string &text, std::vector<int32_t> *widths,
                 std::vector<int32_t> *heights) {
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        std::string token =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (token.empty())
            return false;
        long w = 0, h = 0;
        size_t x = token.find('x');
        try {
            if (x == std::string::npos) {
                w = h = std::stol(token);
            } else {
                w = std::stol(token.substr(0, x));
                h = std::stol(token.substr(x + 1));
            }
        } catch (const std::exception &) {
            return false;
        }
        if (w < 1 || h < 1)
            return false;
        widths->push_back(static_cast<int32_t>(w));
        heights->push_back(static_cast<int32_t>(h));
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return !widths->empty();
}

int run_bench(const BenchArgs &args) {
    if (args.repeats < 5)
        return fail_usage("--repeats must be >= 5");
    std::vector<int32_t> widths, heights;
    if (!parse_sizes(args.sizes, &widths, &heights))
        return fail_usage("bad --sizes list '" + args.sizes + "' (e.g. 256,512x512,1024)");

    constexpr std::uint64_t kSeed = 42;
    const gmsd_metric metrics[] = {GMSD_METRIC_GMSD, GMSD_METRIC_GMSM, GMSD_METRIC_PSNR,
                                   GMSD_METRIC_MSE_SD};

    json merged;
    merged["metrics"] = json::array();
    for (gmsd_metric metric : metrics) {
        char *raw = nullptr;
        gmsd_status st = gmsd_bench(metric, widths.data(), heights.data(), widths.size(),
                                    args.repeats, kSeed, args.parallel ? 1 : 0, &raw);
        if (st != GMSD_OK)
            return fail_status(st);
        JsonPtr report(raw);
        merged["metrics"].push_back(json::parse(report.get()));
    }

    if (!args.csv_path.empty()) {
        std::ofstream csv(args.csv_path);
        if (!csv) {
            std::cerr << "gmsd: cannot write " << args.csv_path << "\n";
            return kExitIo;
        }
        csv << "metric,width,height,pixels,seconds\n";
        for (const auto &report : merged["metrics"])
            for (const auto &entry : report["sizes"])
                csv << report["metric"].get<std::string>() << ","
                    << entry["width"].get<std::int64_t>() << ","
                    << entry["height"].get<std::int64_t>() << ","
                    << entry["pixels"].get<std::int64_t>() << ","
                    << entry["seconds"].get<double>() << "\n";
    }

    if (args.json_mode) {
        std::cout << merged.dump() << "\n";
        return kExitOk;
    }
    std::printf("%-7s %11s %11s %9s\n", "metric", "size", "seconds", "batch");
    for (const auto &report : merged["metrics"]) {
        for (const auto &entry : report["sizes"]) {
            char size_buf[32];
            std::snprintf(size_buf, sizeof size_buf, "%" PRId64 "x%" PRId64,
                          entry["width"].get<std::int64_t>(),
                          entry["height"].get<std::int64_t>());
            std::printf("%-7s %11s %11.6f %9" PRId64 "\n",
                        report["metric"].get<std::string>().c_str(), size_buf,
                        entry["seconds"].get<double>(), entry["batch"].get<std::int64_t>());
            if (args.parallel)
                std::printf("%-7s %11s %11.6f %9s\n",
                            report["metric"].get<std::string>().c_str(), size_buf,
                            entry["seconds_parallel"].get<double>(), "(parallel)");
        }
        if (!report["scaling_exponent"].is_null())
            std::printf("%-7s scaling_exponent %.4f\n",
                        report["metric"].get<std::string>().c_str(),
                        report["scaling_exponent"].get<double>());
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Gradient magnitude similarity deviation image quality toolkit"};
    app.require_subcommand(1);

    ScoreArgs score;
    CLI::App *score_cmd = app.add_subcommand("score", "Score a distorted image against a reference");
    score_cmd->add_option("ref", score.ref, "Reference image (PGM/PPM/PNG)")->required();
    score_cmd->add_option("dist", score.dist, "Distorted image")->required();
    score_cmd->add_option("--metric", score.metric, "gmsd|gmsm|psnr|mse-sd");
    score_cmd->add_option("--c", score.c, "Stability constant (default 0.0026)");
    score_cmd->add_flag("--no-downsample", score.no_downsample,
                        "Skip the 2x2 average filter + downsample stage");
    score_cmd->add_option("--dump-map", score.dump_map,
                          "Write the similarity map as PGM (gmsd/gmsm only)");
    score_cmd->add_flag("--json", score.json_mode, "JSON output");

    EvaluateArgs evaluate;
    CLI::App *eval_cmd = app.add_subcommand("evaluate", "Evaluate a metric over a CSV manifest");
    eval_cmd->add_option("manifest", evaluate.manifest, "Manifest CSV")->required();
    eval_cmd->add_option("--metric", evaluate.metric, "gmsd|gmsm|psnr|mse-sd");
    eval_cmd->add_option("--group-by", evaluate.group_by, "none|distortion|dataset");
    eval_cmd->add_option("--logistic", evaluate.logistic, "standard|literal");
    eval_cmd->add_flag("--json", evaluate.json_mode, "JSON output");

    DistortArgs distort;
    CLI::App *distort_cmd = app.add_subcommand("distort", "Apply a seeded synthetic distortion");
    distort_cmd->add_option("input", distort.input, "Input image")->required();
    distort_cmd->add_option("--kind", distort.kind, "awn|blur|contrast")->required();
    distort_cmd->add_option("--level", distort.level, "Noise sigma / blur sigma / contrast factor")
        ->required();
    distort_cmd->add_option("--seed", distort.seed, "Noise seed (default 0)");
    distort_cmd->add_option("--out", distort.out, "Output PGM path")->required();

    SweepArgs sweep;
    CLI::App *sweep_cmd = app.add_subcommand("sweep", "Sweep the stability constant c");
    sweep_cmd->add_option("manifest", sweep.manifest, "Manifest CSV")->required();
    sweep_cmd->add_option("--c-min", sweep.c_min, "Smallest c")->required();
    sweep_cmd->add_option("--c-max", sweep.c_max, "Largest c")->required();
    sweep_cmd->add_option("--steps", sweep.steps, "Number of c values (>= 2)")->required();
    sweep_cmd->add_flag("--log-scale", sweep.log_scale, "Space the c values geometrically");
    sweep_cmd->add_flag("--json", sweep.json_mode, "JSON output");

    BenchArgs bench;
    CLI::App *bench_cmd = app.add_subcommand("bench", "Time the metric kernels");
    bench_cmd->add_option("--sizes", bench.sizes, "Comma list of N or WxH (default 256,512,1024)");
    bench_cmd->add_option("--repeats", bench.repeats, "Measurements per size (>= 5, default 9)");
    bench_cmd->add_flag("--parallel", bench.parallel, "Also time the parallel kernel mode");
    bench_cmd->add_option("--csv", bench.csv_path, "Also write (N, seconds) pairs as CSV");
    bench_cmd->add_flag("--json", bench.json_mode, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e); // prints the message to stderr
        return kExitValidation;
    }

    if (score_cmd->parsed())
        return run_score(score);
    if (eval_cmd->parsed())
        return run_evaluate(evaluate);
    if (distort_cmd->parsed())
        return run_distort(distort);
    if (sweep_cmd->parsed())
        return run_sweep(sweep);
    if (bench_cmd->parsed())
        return run_bench(bench);
    return fail_usage("no subcommand");
}
