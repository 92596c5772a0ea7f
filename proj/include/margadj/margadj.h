/*
 * margadj: marginal-adjusted estimation for two-way contingency tables.
 *
 * C interface over the C++ core. All objects are opaque handles created by a
 * *_create / *_parse / computing function and released with the matching
 * *_free function (free functions accept NULL). Every fallible function
 * returns a margadj_status; on failure the output handle is left untouched
 * and margadj_last_error() describes the problem for the calling thread.
 *
 * Indices are 0-based. Matrices are exchanged as row-major buffers.
 * Strings returned through `char** out` are heap-allocated and must be
 * released with margadj_string_free.
 */
#ifndef MARGADJ_MARGADJ_H
#define MARGADJ_MARGADJ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(MARGADJ_BUILDING_LIBRARY)
#define MARGADJ_API __declspec(dllexport)
#else
#define MARGADJ_API __declspec(dllimport)
#endif
#else
#define MARGADJ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum margadj_status {
  MARGADJ_OK = 0,
  MARGADJ_ERR_INVALID_ARGUMENT = 1, /* NULL pointer, bad index, buffer too small */
  MARGADJ_ERR_PARSE = 2,            /* malformed input text */
  MARGADJ_ERR_CONTRACT = 3,         /* numeric or domain precondition violated */
  MARGADJ_ERR_IO = 4,               /* file could not be read or written */
  MARGADJ_ERR_INTERNAL = 5
} margadj_status;

typedef enum margadj_format { MARGADJ_FORMAT_CSV = 0, MARGADJ_FORMAT_JSON = 1 } margadj_format;

typedef enum margadj_normalization {
  MARGADJ_NORMALIZATION_PROBABILITIES = 0,
  MARGADJ_NORMALIZATION_COUNTS = 1
} margadj_normalization;

typedef struct margadj_counts margadj_counts;         /* I x J count table */
typedef struct margadj_table margadj_table;           /* I x J probability table */
typedef struct margadj_marginal margadj_marginal;     /* probability vector */
typedef struct margadj_adjusted margadj_adjusted;     /* table reweighted to a known column marginal */
typedef struct margadj_covariance margadj_covariance; /* symmetric I x I matrix */
typedef struct margadj_config margadj_config;         /* Monte Carlo experiment configuration */
typedef struct margadj_grid margadj_grid;             /* Monte Carlo experiment results */
typedef struct margadj_case_study margadj_case_study;

/* Message for the most recent failure on this thread ("" if none). */
MARGADJ_API const char* margadj_last_error(void);
MARGADJ_API const char* margadj_version(void);
MARGADJ_API void margadj_string_free(char* s);

/* ---- count tables ---------------------------------------------------- */

MARGADJ_API margadj_status margadj_counts_create(size_t rows, size_t cols, const int64_t* counts,
                                                 margadj_counts** out);
MARGADJ_API margadj_status margadj_counts_parse_file(const char* path, margadj_counts** out);
MARGADJ_API margadj_status margadj_counts_parse_text(const char* text, margadj_counts** out);
MARGADJ_API void margadj_counts_free(margadj_counts* c);
MARGADJ_API size_t margadj_counts_rows(const margadj_counts* c);
MARGADJ_API size_t margadj_counts_cols(const margadj_counts* c);
MARGADJ_API int64_t margadj_counts_total(const margadj_counts* c);
/* Copies rows * cols counts into out (row-major). */
MARGADJ_API margadj_status margadj_counts_get(const margadj_counts* c, int64_t* out, size_t len);
MARGADJ_API margadj_status margadj_counts_to_csv(const margadj_counts* c, char** out);

/* ---- probability tables ---------------------------------------------- */

MARGADJ_API margadj_status margadj_table_create(size_t rows, size_t cols, const double* cells,
                                                margadj_table** out);
/* Table file with probabilities, or integer counts that are normalized. */
MARGADJ_API margadj_status margadj_table_parse_file(const char* path, margadj_table** out);
MARGADJ_API margadj_status margadj_table_from_counts(const margadj_counts* c, margadj_table** out);
MARGADJ_API margadj_status margadj_table_build_2x2(double row_first, double col_first, double cpr,
                                                   margadj_table** out);
MARGADJ_API void margadj_table_free(margadj_table* t);
MARGADJ_API size_t margadj_table_rows(const margadj_table* t);
MARGADJ_API size_t margadj_table_cols(const margadj_table* t);
MARGADJ_API margadj_status margadj_table_get(const margadj_table* t, double* out, size_t len);
MARGADJ_API margadj_status margadj_table_row_marginal(const margadj_table* t, double* out, size_t len);
MARGADJ_API margadj_status margadj_table_col_marginal(const margadj_table* t, double* out, size_t len);
/* Ratio p_ij p_rs / (p_rj p_is); *defined is 0 (and *value NaN) when a cell is zero. */
MARGADJ_API margadj_status margadj_table_cross_product_ratio(const margadj_table* t, size_t i, size_t r, size_t j,
                                                             size_t s, double* value, int* defined);
MARGADJ_API margadj_status margadj_table_sample(const margadj_table* t, int64_t n, uint64_t seed,
                                                margadj_counts** out);
MARGADJ_API margadj_status margadj_table_to_csv(const margadj_table* t, char** out);

/* ---- marginals -------------------------------------------------------- */

MARGADJ_API margadj_status margadj_marginal_create(size_t len, const double* probs, margadj_marginal** out);
/* known_column != 0 rejects zero entries. */
MARGADJ_API margadj_status margadj_marginal_parse_file(const char* path, int known_column, margadj_marginal** out);
MARGADJ_API margadj_status margadj_marginal_parse_text(const char* text, int known_column, margadj_marginal** out);
MARGADJ_API void margadj_marginal_free(margadj_marginal* m);
MARGADJ_API size_t margadj_marginal_size(const margadj_marginal* m);
MARGADJ_API margadj_status margadj_marginal_get(const margadj_marginal* m, double* out, size_t len);
MARGADJ_API margadj_normalization margadj_marginal_normalization(const margadj_marginal* m);

/* ---- estimators ------------------------------------------------------- */

/* p_i = sum_t w_t 1{x_t = i}; xs are 0-based categories < categories. */
MARGADJ_API margadj_status margadj_weighted_univariate(const uint32_t* xs, const double* weights, size_t n,
                                                       size_t categories, double* out);
MARGADJ_API margadj_status margadj_cloned_estimator(const uint32_t* xs, const int64_t* clones, size_t n,
                                                    size_t categories, double* out);
MARGADJ_API margadj_status margadj_effective_sample_factor(const double* weights, size_t n, double* out);

MARGADJ_API margadj_status margadj_adjust(const margadj_table* phat, const margadj_marginal* known_col,
                                          margadj_adjusted** out);
MARGADJ_API void margadj_adjusted_free(margadj_adjusted* a);
MARGADJ_API margadj_status margadj_adjusted_cells(const margadj_adjusted* a, double* out, size_t len);
MARGADJ_API margadj_status margadj_adjusted_row_marginal(const margadj_adjusted* a, double* out, size_t len);
/* Number of columns without observations; their indices via margadj_adjusted_zero_columns. */
MARGADJ_API size_t margadj_adjusted_zero_column_count(const margadj_adjusted* a);
MARGADJ_API margadj_status margadj_adjusted_zero_columns(const margadj_adjusted* a, size_t* out, size_t len);

MARGADJ_API margadj_status margadj_ipf_fit(const margadj_table* init, const margadj_marginal* row_target,
                                           const margadj_marginal* col_target, double tol, int max_iter,
                                           margadj_table** fitted, int* iterations, int* converged);

/* ---- asymptotics ------------------------------------------------------ */

MARGADJ_API margadj_status margadj_sigma_marginal(const margadj_table* p, margadj_covariance** out);
MARGADJ_API margadj_status margadj_gamma_adjusted(const margadj_table* p, margadj_covariance** out);
MARGADJ_API margadj_status margadj_conditional_cov_oracle(const margadj_table* p, margadj_covariance** out);
MARGADJ_API margadj_status margadj_covariance_difference(const margadj_covariance* a, const margadj_covariance* b,
                                                         margadj_covariance** out);
MARGADJ_API void margadj_covariance_free(margadj_covariance* m);
MARGADJ_API size_t margadj_covariance_dim(const margadj_covariance* m);
MARGADJ_API margadj_status margadj_covariance_get(const margadj_covariance* m, double* out, size_t len);
MARGADJ_API margadj_status margadj_covariance_min_eigenvalue(const margadj_covariance* m, double* out);
MARGADJ_API margadj_status margadj_variance_gap(const margadj_table* p, const double* c, size_t len, double* gap,
                                                double* direct);
MARGADJ_API margadj_status margadj_chi2_reduction_bound(const margadj_table* p, double* out);
MARGADJ_API margadj_status margadj_asymptotic_reduction(const margadj_table* p, size_t row, double* out);

/* ---- simulation ------------------------------------------------------- */

MARGADJ_API margadj_status margadj_config_parse_file(const char* path, margadj_config** out);
MARGADJ_API margadj_status margadj_config_parse_json(const char* text, margadj_config** out);
MARGADJ_API void margadj_config_free(margadj_config* c);
MARGADJ_API margadj_status margadj_config_set_seed(margadj_config* c, uint64_t seed);
MARGADJ_API margadj_status margadj_config_set_replications(margadj_config* c, int64_t replications);
MARGADJ_API margadj_status margadj_config_to_json(const margadj_config* c, char** out);

/* threads = 0 uses all hardware threads; results do not depend on it. */
MARGADJ_API margadj_status margadj_run_experiment(const margadj_config* c, unsigned threads, margadj_grid** out);
MARGADJ_API void margadj_grid_free(margadj_grid* g);
MARGADJ_API size_t margadj_grid_cell_count(const margadj_grid* g);
/* Number of cells that could not be computed (per-cell error markers). */
MARGADJ_API size_t margadj_grid_failed_cells(const margadj_grid* g);
MARGADJ_API margadj_status margadj_grid_cell(const margadj_grid* g, size_t index, int64_t* n, double* log_cpr,
                                             double* reduction_pct, double* asymptotic_pct, double* bias_hat,
                                             double* bias_tilde, int64_t* zero_columns, int* ok);
MARGADJ_API margadj_status margadj_grid_format(const margadj_grid* g, margadj_format format, char** out);

MARGADJ_API margadj_status margadj_case_study_run(const margadj_counts* counts, const margadj_marginal* known_col,
                                                  margadj_case_study** out);
MARGADJ_API void margadj_case_study_free(margadj_case_study* cs);
MARGADJ_API size_t margadj_case_study_rows(const margadj_case_study* cs);
MARGADJ_API margadj_status margadj_case_study_row(const margadj_case_study* cs, size_t row, double* phat,
                                                  double* ptilde, double* relative_difference_pct);
MARGADJ_API size_t margadj_case_study_zero_column_count(const margadj_case_study* cs);
MARGADJ_API margadj_status margadj_case_study_format(const margadj_case_study* cs, margadj_format format,
                                                     char** out);

/* ---- reports (text emitted by the command-line tool) ------------------ */

MARGADJ_API margadj_status margadj_report_estimate(const margadj_counts* c, margadj_format format, char** out);
MARGADJ_API margadj_status margadj_report_adjust(const margadj_counts* c, const margadj_marginal* known_col,
                                                 margadj_format format, char** out);
MARGADJ_API margadj_status margadj_report_asymptotics(const margadj_table* p, margadj_format format, char** out);
MARGADJ_API margadj_status margadj_report_ipf(const margadj_table* init, const margadj_marginal* row_target,
                                              const margadj_marginal* col_target, double tol, int max_iter,
                                              margadj_format format, char** out);

#ifdef __cplusplus
}
#endif

#endif /* MARGADJ_MARGADJ_H */
