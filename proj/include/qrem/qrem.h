/* C interface to the qrem library: remainder laws of base-q digit expansions,
 * the stopping-depth coupling, total-variation bounds and chi-square
 * experiments.
 *
 * Conventions: every fallible call returns a qrem_status and writes results
 * through out-pointers. On failure qrem_last_error() holds a message for the
 * calling thread. Handles are immutable after creation and may be shared
 * between threads. Variable-length outputs use (buf, len, needed): pass
 * buf = NULL to query the size.
 */
#ifndef QREM_QREM_H
#define QREM_QREM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(QREM_BUILDING)
#    define QREM_API __declspec(dllexport)
#  else
#    define QREM_API __declspec(dllimport)
#  endif
#else
#  define QREM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qrem_status {
  QREM_OK = 0,
  QREM_E_DOMAIN = 1,
  QREM_E_BUDGET = 2,
  QREM_E_TOLERANCE = 3,
  QREM_E_UNSUPPORTED = 4,
  QREM_E_PARSE = 5,
  QREM_E_IO = 6,
  QREM_E_CONVERGENCE = 7,
  QREM_E_PRECISION = 8,
  QREM_E_ZERO_DENSITY = 9,
  QREM_E_DEPTH = 10,
  QREM_E_REJECTION = 11,
  QREM_E_SHAPE = 12,
  QREM_E_INVALID_ARGUMENT = 13,
  QREM_E_INTERNAL = 99
} qrem_status;

typedef struct qrem_model qrem_model;
typedef struct qrem_ladder qrem_ladder;

QREM_API const char* qrem_version(void);
QREM_API const char* qrem_last_error(void);
QREM_API const char* qrem_status_name(qrem_status status);

/* ---- models ------------------------------------------------------------ */

/* Specs: uniform, benford:q=10, power:alpha=0.5, pwc:q=2,m=2,w=0.4;0.4;1.6;1.6,
 * punctured:x0=0.25, clip:eps=0.01:<spec>, product:<spec>|<spec>. */
/* On failure *out is set to NULL. */
QREM_API qrem_status qrem_model_parse(const char* spec, qrem_model** out);
QREM_API void qrem_model_free(qrem_model* model);
/* Canonical spec string (NUL-terminated; needed includes the NUL). */
QREM_API qrem_status qrem_model_spec(const qrem_model* model, char* buf, size_t len, size_t* needed);
/* 1 for densities on [0,1), k for products. */
QREM_API size_t qrem_model_dimension(const qrem_model* model);
QREM_API qrem_status qrem_model_pdf(const qrem_model* model, double x, double* out);
QREM_API qrem_status qrem_model_cdf(const qrem_model* model, double x, double* out);
QREM_API qrem_status qrem_model_quantile(const qrem_model* model, double u, double* out);
/* `count` i.i.d. inverse-CDF draws from RNG substream `stream` of `seed`. */
QREM_API qrem_status qrem_model_sample(const qrem_model* model, uint64_t seed, uint64_t stream, size_t count,
                                       double* out);
/* inf of f over I_{k;n} = [(k-1) q^-n, k q^-n), 1 <= k <= q^n. */
QREM_API qrem_status qrem_model_interval_infimum(const qrem_model* model, uint64_t k, int n, int q, double* out);

/* ---- remainder law ----------------------------------------------------- */

QREM_API qrem_status qrem_remainder_pdf(const qrem_model* model, int q, int n, double x, double* out);
QREM_API qrem_status qrem_remainder_cdf(const qrem_model* model, int q, int n, double x, double* out);
/* x has qrem_model_dimension(model) coordinates. */
QREM_API qrem_status qrem_remainder_pdf_multi(const qrem_model* model, int q, int n, const double* x, size_t k,
                                              double* out);
/* First n base-q digits of x (exact: x is read as the dyadic rational it is). */
QREM_API qrem_status qrem_digits(double x, int q, int n, int* digits);
/* T^n(x), computed exactly and rounded to double. */
QREM_API qrem_status qrem_apply_T(double x, int q, int n, double* out);
QREM_API qrem_status qrem_benford_digit_marginal(int q, int n, int d, double* out);
/* P(X_n = 0) - P(X_n = q-1) under the Benford law. */
QREM_API qrem_status qrem_benford_digit_gap(int q, int n, double* out);

/* ---- coupling ---------------------------------------------------------- */

typedef struct qrem_envelope_segment {
  double a, b;        /* cell [a, b) */
  double left, right; /* envelope values at a and at b- */
} qrem_envelope_segment;

typedef struct qrem_sample {
  int has_n; /* 0 when the draw came from the residual branch (N > depth) */
  int n;
  uint64_t k;
  double u;
  double x;
} qrem_sample;

QREM_API int qrem_default_depth(int q);
QREM_API qrem_status qrem_ladder_build(const qrem_model* model, int q, int depth, qrem_ladder** out);
QREM_API void qrem_ladder_free(qrem_ladder* ladder);
QREM_API int qrem_ladder_depth(const qrem_ladder* ladder);
QREM_API int qrem_ladder_base(const qrem_ladder* ladder);
QREM_API qrem_status qrem_ladder_prob_n_le(const qrem_ladder* ladder, int n, double* out);
QREM_API qrem_status qrem_ladder_cond_prob_n_le(const qrem_ladder* ladder, double x, int n, double* out);
/* c_{k;n} for k = 1..q^n. */
QREM_API qrem_status qrem_ladder_increments(const qrem_ladder* ladder, int n, double* buf, size_t len, size_t* needed);
QREM_API qrem_status qrem_ladder_envelope(const qrem_ladder* ladder, int n, qrem_envelope_segment* buf, size_t len,
                                          size_t* needed);
/* `count` draws from RNG substream `stream` of `seed`. */
QREM_API qrem_status qrem_ladder_sample(const qrem_ladder* ladder, uint64_t seed, uint64_t stream, size_t count,
                                        qrem_sample* out);

/* ---- total variation --------------------------------------------------- */

typedef enum qrem_xi_rule {
  QREM_XI_LEFT = 0,
  QREM_XI_MIDPOINT = 1,
  QREM_XI_RIGHT = 2,
  QREM_XI_CELL_SUP = 3
} qrem_xi_rule;

typedef struct qrem_tv_options {
  const qrem_ladder* ladder; /* optional: adds the coupling and Wasserstein bounds */
  const qrem_model* proxy;   /* optional smooth g for the mixed bound */
  qrem_xi_rule xi_rule;
  double tolerance;
} qrem_tv_options;

#define QREM_MAX_BOUNDS 8

typedef struct qrem_named_value {
  char name[32];
  double value;
} qrem_named_value;

typedef struct qrem_tv_report {
  int q, n;
  int has_exact;
  double exact;
  char method[16];
  size_t bound_count;
  qrem_named_value bounds[QREM_MAX_BOUNDS];
  int has_second_order;
  double second_order_leading;
  double second_order_riemann;
  int has_wasserstein;
  double w_tv;
  double w_quarter;
  int consistent;
} qrem_tv_report;

QREM_API void qrem_tv_options_init(qrem_tv_options* options);
QREM_API qrem_status qrem_tv_report_compute(const qrem_model* model, int q, int n, const qrem_tv_options* options,
                                            qrem_tv_report* out);
/* x0 may be NULL. */
QREM_API qrem_status qrem_tv_exact_crossing(const qrem_model* model, int q, int n, double* tv, double* x0);
QREM_API qrem_status qrem_tv_quadrature(const qrem_model* model, int q, int n, double tol, double* out);
QREM_API qrem_status qrem_tv_bound_gradient(const qrem_model* model, int q, int n, int per_cell, double* out);
/* per_cell may be NULL; set to NaN when unavailable. */
QREM_API qrem_status qrem_tv_bound_mixed(const qrem_model* f, const qrem_model* g, int q, int n, double* value,
                                         double* l1_distance, double* per_cell);
QREM_API qrem_status qrem_tv_bound_second_order(const qrem_model* model, int q, int n, qrem_xi_rule rule,
                                                double* leading, double* riemann_limit);
QREM_API qrem_status qrem_tv_bound_refined(const qrem_model* model, int q, int n, double* out);
QREM_API qrem_status qrem_coupling_tv_bound(const qrem_ladder* ladder, int n, double* out);
QREM_API qrem_status qrem_wasserstein_bounds(const qrem_ladder* ladder, int n, double* w_tv, double* w_quarter);
/* per_cell is NaN when unavailable. */
QREM_API qrem_status qrem_tv_bound_multivariate(const qrem_model* model, int q, int n, double* global,
                                                double* per_cell);
QREM_API qrem_status qrem_tv_quadrature_multi(const qrem_model* model, int q, int n, int panels, double* value,
                                              double* error);
QREM_API qrem_status qrem_sup_deviation(const qrem_model* model, int q, int n, int grid_size, double* out);

/* ---- goodness of fit --------------------------------------------------- */

typedef struct qrem_gof_config {
  const qrem_model* model;
  int q, n, k;
  int sample_size;
  int replications;
  double alpha;
  uint64_t seed;
  int threads; /* 0: QREM_THREADS or the hardware concurrency */
} qrem_gof_config;

typedef struct qrem_gof_result {
  double rejection_rate;
  uint64_t rejections;
  int replications;
  double standard_error;
  double statistic_mean;
  double statistic_sd;
  double p_value_mean;
  int low_expected_count; /* expected count per category below 5 */
} qrem_gof_result;

QREM_API void qrem_gof_config_init(qrem_gof_config* config);
QREM_API qrem_status qrem_gof_rejection_rate(const qrem_gof_config* config, qrem_gof_result* out);
QREM_API qrem_status qrem_chi_square_uniform_digits(const double* samples, size_t count, int q, int n, int k,
                                                    double* statistic, double* p_value);
QREM_API qrem_status qrem_chi_square_sf(double statistic, double df, double* out);
QREM_API qrem_status qrem_ks_test(const qrem_model* model, const double* samples, size_t count, double* statistic,
                                  double* p_value);
QREM_API int qrem_default_threads(void);

#ifdef __cplusplus
}
#endif

#endif /* QREM_QREM_H */
