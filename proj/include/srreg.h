/*
 * srreg: shrinkage-reweighted robust linear regression.
 *
 * C interface to the srreg core. All objects are opaque handles created and
 * destroyed through this API; every fallible call returns an sr_status and
 * leaves a message retrievable with sr_last_error() on the calling thread.
 * Strings returned through char** out-parameters are heap-allocated and must
 * be released with sr_string_free().
 */

#ifndef SRREG_H
#define SRREG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef SRREG_API
#if defined(_WIN32)
#define SRREG_API __declspec(dllexport)
#else
#define SRREG_API __attribute__((visibility("default")))
#endif
#endif

typedef enum sr_status {
    SR_OK = 0,
    SR_ERROR_INVALID_ARGUMENT = 1, /* null handles, bad enum strings */
    SR_ERROR_VALIDATION = 2,       /* bad data, malformed files, over-trimming */
    SR_ERROR_NUMERICAL = 3,        /* factorization failures, collinearity */
    SR_ERROR_IO = 4
} sr_status;

typedef struct sr_dataset sr_dataset;
typedef struct sr_fit_result sr_fit_result;
typedef struct sr_sim_result sr_sim_result;

SRREG_API const char* sr_version(void);

/* Message for the most recent failing call on this thread. */
SRREG_API const char* sr_last_error(void);

SRREG_API void sr_string_free(char* s);

/* ---- datasets ---- */

/* carriers: n*p row-major, response: n values. */
SRREG_API sr_status sr_dataset_create(const double* carriers, const double* response,
                                      int32_t n, int32_t p, sr_dataset** out);

/* response_column: name in the header, or NULL for the last column. */
SRREG_API sr_status sr_dataset_load_csv(const char* path, int32_t has_header,
                                        const char* response_column, sr_dataset** out);

SRREG_API sr_status sr_dataset_builtin(const char* name, sr_dataset** out);

/* Comma-separated list of embedded dataset names. */
SRREG_API const char* sr_builtin_dataset_names(void);

SRREG_API int32_t sr_dataset_n(const sr_dataset* ds);
SRREG_API int32_t sr_dataset_p(const sr_dataset* ds);
SRREG_API uint64_t sr_dataset_hash(const sr_dataset* ds);
SRREG_API sr_status sr_dataset_write_csv(const sr_dataset* ds, const char* path);
SRREG_API void sr_dataset_free(sr_dataset* ds);

/* ---- fitting ---- */

typedef struct sr_fit_options {
    double delta1; /* first-stage tail probability, default 0.025 */
    double delta2; /* residual-stage tail probability, default 0.01 */
} sr_fit_options;

SRREG_API void sr_fit_options_init(sr_fit_options* opts);

/* method: "sr" or "ols". opts may be NULL for defaults. */
SRREG_API sr_status sr_fit(const sr_dataset* ds, const char* method,
                           const sr_fit_options* opts, sr_fit_result** out);

SRREG_API int32_t sr_fit_p(const sr_fit_result* f);
SRREG_API double sr_fit_intercept(const sr_fit_result* f);
SRREG_API sr_status sr_fit_slopes(const sr_fit_result* f, double* out /* p values */);
SRREG_API double sr_fit_sigma2(const sr_fit_result* f);
SRREG_API double sr_fit_r2(const sr_fit_result* f);
SRREG_API double sr_fit_adjusted_r2(const sr_fit_result* f);
SRREG_API int32_t sr_fit_outlier_count(const sr_fit_result* f);

/* 1-based ascending indices; out must hold sr_fit_outlier_count values. */
SRREG_API sr_status sr_fit_outliers(const sr_fit_result* f, int32_t* out);

/* w and wr must each hold n values (0 or 1); either may be NULL. */
SRREG_API sr_status sr_fit_weights(const sr_fit_result* f, double* w, double* wr);

/* Full report with coefficients, weights, outliers and provenance. */
SRREG_API sr_status sr_fit_report_json(const sr_fit_result* f, char** out);

SRREG_API void sr_fit_free(sr_fit_result* f);

/* ---- simulation harness ---- */

typedef struct sr_sim_config {
    const char* scenario; /* "ne", "te" or "neo" */
    int32_t p;
    int32_t n;
    int32_t m;    /* replications */
    double delta; /* contamination fraction in [0, 0.5) */
    const double* lambda_grid;
    int32_t lambda_count;
    const double* k_grid;
    int32_t k_count;
    uint64_t seed;
    int32_t threads;     /* 0: hardware concurrency */
    double delta1;
    double delta2;
    int32_t fixed_count; /* nonzero: contaminate exactly round(delta*n) rows */
    int32_t timing;      /* nonzero: include seconds-per-fit in the summary */
} sr_sim_config;

SRREG_API void sr_sim_config_init(sr_sim_config* cfg);

SRREG_API sr_status sr_simulate(const sr_sim_config* cfg, sr_sim_result** out);

/* transform: "regression_y" or "x". */
SRREG_API sr_status sr_equivariance(const sr_sim_config* cfg, const char* transform,
                                    sr_sim_result** out);

/* Metrics table, one row per (method, lambda, k). */
SRREG_API sr_status sr_sim_result_csv(const sr_sim_result* r, char** out);

/* Config echo, per-lambda and overall max rollups, failure counts. */
SRREG_API sr_status sr_sim_result_summary_json(const sr_sim_result* r, char** out);

SRREG_API void sr_sim_result_free(sr_sim_result* r);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SRREG_H */
