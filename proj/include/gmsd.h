/* libgmsd -- full-reference image quality assessment based on gradient
 * magnitude similarity with standard-deviation pooling, plus the usual
 * evaluation machinery (logistic regression, rank/linear correlation,
 * F-tests) and a timing harness.
 *
 * All functions return gmsd_status; on failure a human-readable message
 * is available from gmsd_last_error() (thread-local, valid until the next
 * failing call on the same thread). Objects returned through out-pointers
 * are owned by the caller and released with the matching *_free function.
 *
 * Images are grayscale, row-major, with samples normalized to [0, 1].
 */

#ifndef GMSD_H
#define GMSD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define GMSD_API __declspec(dllexport)
#else
#  define GMSD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gmsd_status {
    GMSD_OK = 0,
    GMSD_ERR_IO = 2,      /* unreadable/unwritable files, malformed headers or manifests */
    GMSD_ERR_INVALID = 3, /* bad arguments: dimension mismatch, image too small, bad flags */
    GMSD_ERR_NOMEM = 4,
    GMSD_ERR_INTERNAL = 5
} gmsd_status;

GMSD_API const char *gmsd_version(void);
GMSD_API const char *gmsd_status_name(gmsd_status status);
GMSD_API const char *gmsd_last_error(void);

/* ------------------------------------------------------------------ */
/* Images                                                              */
/* ------------------------------------------------------------------ */

typedef struct gmsd_image gmsd_image; /* opaque */

/* Loads binary PGM (P5), binary PPM (P6) or PNG, all 8-bit. Gray sources
 * map v -> v/255; color sources are reduced to luma
 * Y = 0.299 R + 0.587 G + 0.114 B before normalization. */
GMSD_API gmsd_status gmsd_image_load(const char *path, gmsd_image **out);

/* Wraps caller-provided samples (row-major, length width*height, each in
 * [0, 1]) into a new image. The samples are copied. */
GMSD_API gmsd_status gmsd_image_create(int32_t width, int32_t height,
                                       const double *samples, gmsd_image **out);

/* Writes binary PGM (P5, maxval 255); samples are quantized with
 * round-half-up of s*255 and clamped to [0, 255]. */
GMSD_API gmsd_status gmsd_image_save_pgm(const gmsd_image *image, const char *path);

GMSD_API void gmsd_image_free(gmsd_image *image);

GMSD_API int32_t gmsd_image_width(const gmsd_image *image);
GMSD_API int32_t gmsd_image_height(const gmsd_image *image);
/* Row-major samples; pointer valid for the lifetime of the image. */
GMSD_API const double *gmsd_image_samples(const gmsd_image *image);

/* Seeded synthetic distortions. level is the noise sigma (luminance units)
 * for AWN, the blur sigma (pixels) for GAUSSIAN_BLUR, and the contrast
 * multiplier for CONTRAST. Identical (kind, level, seed, input) give
 * bit-identical output. */
typedef enum gmsd_distortion {
    GMSD_DISTORT_AWN = 0,
    GMSD_DISTORT_GAUSSIAN_BLUR = 1,
    GMSD_DISTORT_CONTRAST = 2
} gmsd_distortion;

GMSD_API gmsd_status gmsd_image_distort(const gmsd_image *input, gmsd_distortion kind,
                                        double level, uint64_t seed, gmsd_image **out);

/* ------------------------------------------------------------------ */
/* Metric kernel                                                       */
/* ------------------------------------------------------------------ */

typedef struct gmsd_options {
    double c;       /* stability constant of the similarity map; > 0 */
    int downsample; /* 2x2 average filter + factor-2 downsample before gradients */
    int threads;    /* <= 1: sequential; > 1: parallel map passes (bit-identical) */
} gmsd_options;

/* c = 0.0026, downsample = 1, threads = 1. */
GMSD_API void gmsd_options_init(gmsd_options *options);

typedef struct gmsd_score {
    double gmsd; /* deviation pooling: higher = more distorted, in [0, 0.5] */
    double gmsm; /* mean pooling: higher = more similar, in (0, 1] */
} gmsd_score;

/* Computes the gradient magnitude similarity indices of dist against ref.
 * Images must have identical dimensions; the smaller dimension must be
 * >= 6 with downsampling (>= 3 without). If map_out is non-NULL it
 * receives the similarity map (values in (0, 1]) as a new image. */
GMSD_API gmsd_status gmsd_compute(const gmsd_image *ref, const gmsd_image *dist,
                                  const gmsd_options *options, gmsd_score *out,
                                  gmsd_image **map_out);

/* 10*log10(L^2/MSE) in dB; +infinity when the images are identical. */
GMSD_API gmsd_status gmsd_psnr(const gmsd_image *ref, const gmsd_image *dist, double *out_db);

/* Population standard deviation of the per-pixel squared-difference map. */
GMSD_API gmsd_status gmsd_mse_sd(const gmsd_image *ref, const gmsd_image *dist, double *out);

/* ------------------------------------------------------------------ */
/* Evaluation statistics                                               */
/* ------------------------------------------------------------------ */

/* Tie-aware Spearman rank correlation. Both vectors must be non-constant
 * with n >= 2. */
GMSD_API gmsd_status gmsd_spearman(const double *q, const double *s, size_t n, double *out);

/* Pearson linear correlation of mean-removed vectors. */
GMSD_API gmsd_status gmsd_pearson(const double *q, const double *s, size_t n, double *out);

/* Root mean square error, n >= 1. */
GMSD_API gmsd_status gmsd_rmse(const double *q, const double *s, size_t n, double *out);

/* The 5-parameter monotone regression curve mapping objective scores onto
 * the subjective scale. STANDARD uses the logistic term
 * 1/(1 + exp(b2 (q - b3))); LITERAL uses 1/exp(b2 (q - b3)). */
typedef enum gmsd_logistic_form {
    GMSD_LOGISTIC_STANDARD = 0,
    GMSD_LOGISTIC_LITERAL = 1
} gmsd_logistic_form;

GMSD_API gmsd_status gmsd_logistic_apply(const double *q, size_t n, const double beta[5],
                                         gmsd_logistic_form form, double *out);

/* Least-squares fit of the 5-parameter curve by multi-start Nelder-Mead
 * simplex descent; n >= 5 and q non-constant. */
GMSD_API gmsd_status gmsd_logistic_fit(const double *q, const double *s, size_t n,
                                       gmsd_logistic_form form, double beta_out[5]);

/* Left-tailed F-test on prediction residuals: *h_out = 1 iff the variance
 * of a is significantly smaller than the variance of b at level alpha
 * (alpha in (0, 0.5]), i.e. the model producing a predicts better. */
GMSD_API gmsd_status gmsd_f_test_better(const double *residuals_a, size_t n_a,
                                        const double *residuals_b, size_t n_b,
                                        double alpha, int *h_out);

/* Weight-normalized mean; weights must be positive, n >= 1. */
GMSD_API gmsd_status gmsd_weighted_average(const double *values, const double *weights,
                                           size_t n, double *out);

/* ------------------------------------------------------------------ */
/* Batch evaluation and benchmarking (JSON reports)                    */
/* ------------------------------------------------------------------ */

typedef enum gmsd_metric {
    GMSD_METRIC_GMSD = 0,
    GMSD_METRIC_GMSM = 1,
    GMSD_METRIC_PSNR = 2,
    GMSD_METRIC_MSE_SD = 3
} gmsd_metric;

typedef enum gmsd_group_by {
    GMSD_GROUP_NONE = 0,
    GMSD_GROUP_DISTORTION = 1,
    GMSD_GROUP_DATASET = 2
} gmsd_group_by;

/* Runs the metric over a CSV manifest with header
 *   ref_path,dist_path,subjective,distortion_type,dataset_id
 * (relative paths resolved against the manifest directory), fits the
 * logistic curve per group and reports Spearman/Pearson/RMSE. *json_out
 * receives a JSON array of
 *   {group, n, srocc, plcc, rmse, beta:[5], polarity, fit_fallback}
 * in lexicographic group order; srocc/plcc are absolute values and
 * polarity is "direct" or "inverted". Free with gmsd_string_free. */
GMSD_API gmsd_status gmsd_evaluate_manifest(const char *manifest_path, gmsd_metric metric,
                                            const gmsd_options *options, gmsd_group_by group_by,
                                            gmsd_logistic_form form, char **json_out);

/* Spearman correlation of the GMSD index against the subjective scores of
 * a manifest, once per stability constant, in input order. *json_out
 * receives a JSON array of {c, srocc, polarity}. */
GMSD_API gmsd_status gmsd_sweep(const char *manifest_path, const double *c_values,
                                size_t n_values, char **json_out);

/* Times the metric on seeded random image pairs, one entry per size
 * (median of `repeats` measurements, each auto-batched to >= 1 ms), and
 * fits the log-log scaling exponent. parallel != 0 additionally times the
 * kernel's parallel mode. repeats >= 5. *json_out receives
 *   {metric, repeats, seed, sizes:[{width, height, pixels, seconds, ...}],
 *    scaling_exponent, aux_samples_per_pixel, ...}. */
GMSD_API gmsd_status gmsd_bench(gmsd_metric metric, const int32_t *widths,
                                const int32_t *heights, size_t n_sizes, int repeats,
                                uint64_t seed, int parallel, char **json_out);

GMSD_API void gmsd_string_free(char *s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GMSD_H */
