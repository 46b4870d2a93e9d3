#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "coupling.hpp"
#include "density.hpp"
#include "errors.hpp"
#include "fixed_point.hpp"
#include "gof.hpp"
#include "numerics/special.hpp"
#include "qrem/qrem.h"
#include "remainder.hpp"
#include "tv_metrics.hpp"

#ifndef QREM_VERSION
#define QREM_VERSION "0.0.0"
#endif

struct qrem_model {
  qrem::Model model;
};

struct qrem_ladder {
  qrem::InfimumLadder ladder;
};

namespace {

thread_local std::string g_last_error;

qrem_status to_status(qrem::ErrorKind k) {
  using qrem::ErrorKind;
  switch (k) {
    case ErrorKind::Domain: return QREM_E_DOMAIN;
    case ErrorKind::Budget: return QREM_E_BUDGET;
    case ErrorKind::Tolerance: return QREM_E_TOLERANCE;
    case ErrorKind::Unsupported: return QREM_E_UNSUPPORTED;
    case ErrorKind::Parse: return QREM_E_PARSE;
    case ErrorKind::Io: return QREM_E_IO;
    case ErrorKind::Convergence: return QREM_E_CONVERGENCE;
    case ErrorKind::Precision: return QREM_E_PRECISION;
    case ErrorKind::ZeroDensity: return QREM_E_ZERO_DENSITY;
    case ErrorKind::Depth: return QREM_E_DEPTH;
    case ErrorKind::Rejection: return QREM_E_REJECTION;
    case ErrorKind::Shape: return QREM_E_SHAPE;
    case ErrorKind::InvalidArgument: return QREM_E_INVALID_ARGUMENT;
  }
  return QREM_E_INTERNAL;
}

template <class F>
qrem_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return QREM_OK;
  } catch (const qrem::Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QREM_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QREM_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return QREM_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) qrem::fail(qrem::ErrorKind::InvalidArgument, std::string(what) + " must not be NULL");
}

const qrem::UnitDensity& univariate(const qrem_model* m) {
  need(m, "model");
  if (!m->model.density) {
    qrem::fail(qrem::ErrorKind::InvalidArgument, "operation needs a univariate model, got " + m->model.spec());
  }
  return *m->model.density;
}

const qrem::ProductDensity& product(const qrem_model* m) {
  need(m, "model");
  if (m->model.product) return *m->model.product;
  qrem::fail(qrem::ErrorKind::InvalidArgument, "operation needs a product model, got " + m->model.spec());
}

template <class T>
void copy_out(const std::vector<T>& src, T* buf, size_t len, size_t* needed) {
  if (needed) *needed = src.size();
  if (!buf) return;
  if (len < src.size()) qrem::fail(qrem::ErrorKind::InvalidArgument, "output buffer too small");
  std::copy(src.begin(), src.end(), buf);
}

void copy_name(char* dst, size_t cap, const std::string& s) {
  const size_t n = std::min(cap - 1, s.size());
  std::memcpy(dst, s.data(), n);
  dst[n] = '\0';
}

qrem::XiRule to_rule(qrem_xi_rule r) {
  switch (r) {
    case QREM_XI_LEFT: return qrem::XiRule::Left;
    case QREM_XI_MIDPOINT: return qrem::XiRule::Midpoint;
    case QREM_XI_RIGHT: return qrem::XiRule::Right;
    case QREM_XI_CELL_SUP: return qrem::XiRule::CellSup;
  }
  qrem::fail(qrem::ErrorKind::InvalidArgument, "unknown xi rule");
}

}  // namespace

extern "C" {

const char* qrem_version(void) { return QREM_VERSION; }

const char* qrem_last_error(void) { return g_last_error.c_str(); }

const char* qrem_status_name(qrem_status s) {
  switch (s) {
    case QREM_OK: return "ok";
    case QREM_E_DOMAIN: return "domain";
    case QREM_E_BUDGET: return "budget";
    case QREM_E_TOLERANCE: return "tolerance";
    case QREM_E_UNSUPPORTED: return "unsupported";
    case QREM_E_PARSE: return "parse";
    case QREM_E_IO: return "io";
    case QREM_E_CONVERGENCE: return "convergence";
    case QREM_E_PRECISION: return "precision";
    case QREM_E_ZERO_DENSITY: return "zero-density";
    case QREM_E_DEPTH: return "depth";
    case QREM_E_REJECTION: return "rejection";
    case QREM_E_SHAPE: return "shape";
    case QREM_E_INVALID_ARGUMENT: return "invalid-argument";
    case QREM_E_INTERNAL: return "internal";
  }
  return "unknown";
}

// ---- models

qrem_status qrem_model_parse(const char* spec, qrem_model** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    need(spec, "spec");
    *out = new qrem_model{qrem::parse_model(spec)};
  });
}

void qrem_model_free(qrem_model* model) { delete model; }

qrem_status qrem_model_spec(const qrem_model* model, char* buf, size_t len, size_t* needed) {
  return guarded([&] {
    need(model, "model");
    const std::string s = model->model.spec();
    if (needed) *needed = s.size() + 1;
    if (!buf) return;
    if (len < s.size() + 1) qrem::fail(qrem::ErrorKind::InvalidArgument, "output buffer too small");
    std::memcpy(buf, s.c_str(), s.size() + 1);
  });
}

size_t qrem_model_dimension(const qrem_model* model) { return model ? model->model.dimension() : 0; }

qrem_status qrem_model_pdf(const qrem_model* model, double x, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = univariate(model).pdf(x);
  });
}

qrem_status qrem_model_cdf(const qrem_model* model, double x, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = univariate(model).cdf(x);
  });
}

qrem_status qrem_model_quantile(const qrem_model* model, double u, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = univariate(model).quantile(u);
  });
}

qrem_status qrem_model_sample(const qrem_model* model, uint64_t seed, uint64_t stream, size_t count, double* out) {
  return guarded([&] {
    const auto& f = univariate(model);
    if (count > 0) need(out, "out");
    qrem::numerics::Rng rng(seed, stream);
    for (size_t i = 0; i < count; ++i) out[i] = std::min(f.quantile(rng.uniform()), std::nextafter(1.0, 0.0));
  });
}

qrem_status qrem_model_interval_infimum(const qrem_model* model, uint64_t k, int n, int q, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = univariate(model).interval_infimum(k, n, q);
  });
}

// ---- remainder

qrem_status qrem_remainder_pdf(const qrem_model* model, int q, int n, double x, double* out) {
  return guarded([&] {
    need(out, "out");
    univariate(model);
    *out = qrem::remainder_pdf(qrem::RemainderLaw(model->model.density, q, n), x);
  });
}

qrem_status qrem_remainder_cdf(const qrem_model* model, int q, int n, double x, double* out) {
  return guarded([&] {
    need(out, "out");
    univariate(model);
    *out = qrem::remainder_cdf(qrem::RemainderLaw(model->model.density, q, n), x);
  });
}

qrem_status qrem_remainder_pdf_multi(const qrem_model* model, int q, int n, const double* x, size_t k, double* out) {
  return guarded([&] {
    need(out, "out");
    need(x, "x");
    need(model, "model");
    if (model->model.product) {
      *out = qrem::remainder_pdf_multi(*model->model.product, q, n, {x, k});
    } else {
      if (k != 1) qrem::fail(qrem::ErrorKind::InvalidArgument, "point dimension does not match the model");
      *out = qrem::remainder_pdf(qrem::RemainderLaw(model->model.density, q, n), x[0]);
    }
  });
}

qrem_status qrem_digits(double x, int q, int n, int* digits) {
  return guarded([&] {
    if (n > 0) need(digits, "digits");
    if (!(x >= 0.0 && x < 1.0)) qrem::fail(qrem::ErrorKind::Domain, "x must lie in [0,1)");
    if (q < 2) qrem::fail(qrem::ErrorKind::Domain, "base q must be at least 2");
    const auto fx = qrem::FixedPointReal::from_double(x, qrem::FixedPointReal::required_bits(q, n));
    const auto d = qrem::digits_of(fx, q, n);
    std::copy(d.digits.begin(), d.digits.end(), digits);
  });
}

qrem_status qrem_apply_T(double x, int q, int n, double* out) {
  return guarded([&] {
    need(out, "out");
    if (!(x >= 0.0 && x < 1.0)) qrem::fail(qrem::ErrorKind::Domain, "x must lie in [0,1)");
    if (q < 2) qrem::fail(qrem::ErrorKind::Domain, "base q must be at least 2");
    const auto fx = qrem::FixedPointReal::from_double(x, qrem::FixedPointReal::required_bits(q, n));
    *out = qrem::apply_T(fx, q, n).to_double();
  });
}

qrem_status qrem_benford_digit_marginal(int q, int n, int d, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = qrem::benford_digit_marginal(q, n, d);
  });
}

qrem_status qrem_benford_digit_gap(int q, int n, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = qrem::benford_digit_gap(q, n);
  });
}

// ---- coupling

int qrem_default_depth(int q) {
  try {
    return qrem::default_depth(q);
  } catch (...) {
    return -1;
  }
}

qrem_status qrem_ladder_build(const qrem_model* model, int q, int depth, qrem_ladder** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    univariate(model);
    *out = new qrem_ladder{qrem::InfimumLadder::build(model->model.density, q, depth)};
  });
}

void qrem_ladder_free(qrem_ladder* ladder) { delete ladder; }

int qrem_ladder_depth(const qrem_ladder* ladder) { return ladder ? ladder->ladder.depth() : -1; }

int qrem_ladder_base(const qrem_ladder* ladder) { return ladder ? ladder->ladder.q() : -1; }

qrem_status qrem_ladder_prob_n_le(const qrem_ladder* ladder, int n, double* out) {
  return guarded([&] {
    need(ladder, "ladder");
    need(out, "out");
    *out = ladder->ladder.prob_n_le(n);
  });
}

qrem_status qrem_ladder_cond_prob_n_le(const qrem_ladder* ladder, double x, int n, double* out) {
  return guarded([&] {
    need(ladder, "ladder");
    need(out, "out");
    *out = ladder->ladder.cond_prob_n_le(x, n);
  });
}

qrem_status qrem_ladder_increments(const qrem_ladder* ladder, int n, double* buf, size_t len, size_t* needed) {
  return guarded([&] {
    need(ladder, "ladder");
    const auto inc = ladder->ladder.increments(n);
    copy_out(std::vector<double>(inc.begin(), inc.end()), buf, len, needed);
  });
}

qrem_status qrem_ladder_envelope(const qrem_ladder* ladder, int n, qrem_envelope_segment* buf, size_t len,
                                 size_t* needed) {
  return guarded([&] {
    need(ladder, "ladder");
    const auto env = ladder->ladder.envelope(n);
    std::vector<qrem_envelope_segment> segs;
    for (const auto& s : env.segments()) segs.push_back({s.a, s.b, s.left, s.right});
    copy_out(segs, buf, len, needed);
  });
}

qrem_status qrem_ladder_sample(const qrem_ladder* ladder, uint64_t seed, uint64_t stream, size_t count,
                               qrem_sample* out) {
  return guarded([&] {
    need(ladder, "ladder");
    if (count > 0) need(out, "out");
    qrem::numerics::Rng rng(seed, stream);
    for (size_t i = 0; i < count; ++i) {
      const auto s = ladder->ladder.sample(rng);
      out[i] = {s.n ? 1 : 0, s.n.value_or(-1), s.k, s.u, s.x};
    }
  });
}

// ---- total variation

void qrem_tv_options_init(qrem_tv_options* options) {
  if (!options) return;
  options->ladder = nullptr;
  options->proxy = nullptr;
  options->xi_rule = QREM_XI_MIDPOINT;
  options->tolerance = 1e-10;
}

qrem_status qrem_tv_report_compute(const qrem_model* model, int q, int n, const qrem_tv_options* options,
                                   qrem_tv_report* out) {
  return guarded([&] {
    need(out, "out");
    const auto& f = univariate(model);
    qrem::TvReportOptions opts;
    if (options) {
      opts.ladder = options->ladder ? &options->ladder->ladder : nullptr;
      opts.xi_rule = to_rule(options->xi_rule);
      opts.tolerance = options->tolerance;
      if (options->proxy) opts.proxy = options->proxy->model.density;
    }
    const auto r = qrem::tv_report(f, q, n, opts);
    qrem_tv_report c{};
    c.q = r.q;
    c.n = r.n;
    c.has_exact = r.exact ? 1 : 0;
    c.exact = r.exact.value_or(std::numeric_limits<double>::quiet_NaN());
    copy_name(c.method, sizeof c.method, r.method);
    c.bound_count = std::min<size_t>(r.bounds.size(), QREM_MAX_BOUNDS);
    for (size_t i = 0; i < c.bound_count; ++i) {
      copy_name(c.bounds[i].name, sizeof c.bounds[i].name, r.bounds[i].name);
      c.bounds[i].value = r.bounds[i].value;
    }
    c.has_second_order = r.second_order ? 1 : 0;
    c.second_order_leading = r.second_order ? r.second_order->leading : std::nan("");
    c.second_order_riemann = r.second_order ? r.second_order->riemann_limit : std::nan("");
    c.has_wasserstein = r.wasserstein ? 1 : 0;
    c.w_tv = r.wasserstein ? r.wasserstein->w_tv : std::nan("");
    c.w_quarter = r.wasserstein ? r.wasserstein->w_quarter : std::nan("");
    c.consistent = r.consistent ? 1 : 0;
    *out = c;
  });
}

qrem_status qrem_tv_exact_crossing(const qrem_model* model, int q, int n, double* tv, double* x0) {
  return guarded([&] {
    need(tv, "tv");
    const auto r = qrem::tv_crossing(univariate(model), q, n);
    *tv = r.tv;
    if (x0) *x0 = r.x0;
  });
}

qrem_status qrem_tv_quadrature(const qrem_model* model, int q, int n, double tol, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = qrem::tv_quadrature(univariate(model), q, n, tol);
  });
}

qrem_status qrem_tv_bound_gradient(const qrem_model* model, int q, int n, int per_cell, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = qrem::tv_bound_gradient(univariate(model), q, n, per_cell != 0);
  });
}

qrem_status qrem_tv_bound_mixed(const qrem_model* f, const qrem_model* g, int q, int n, double* value,
                                double* l1_distance, double* per_cell) {
  return guarded([&] {
    need(value, "value");
    const auto b = qrem::tv_bound_mixed(univariate(f), univariate(g), q, n);
    *value = b.value;
    if (l1_distance) *l1_distance = b.l1_distance;
    if (per_cell) *per_cell = b.per_cell.value_or(std::nan(""));
  });
}

qrem_status qrem_tv_bound_second_order(const qrem_model* model, int q, int n, qrem_xi_rule rule, double* leading,
                                       double* riemann_limit) {
  return guarded([&] {
    need(leading, "leading");
    const auto e = qrem::tv_bound_second_order(univariate(model), q, n, to_rule(rule));
    *leading = e.leading;
    if (riemann_limit) *riemann_limit = e.riemann_limit;
  });
}

qrem_status qrem_tv_bound_refined(const qrem_model* model, int q, int n, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = qrem::tv_bound_refined_low_alpha(univariate(model), q, n);
  });
}

qrem_status qrem_coupling_tv_bound(const qrem_ladder* ladder, int n, double* out) {
  return guarded([&] {
    need(ladder, "ladder");
    need(out, "out");
    *out = qrem::coupling_tv_bound(ladder->ladder, n);
  });
}

qrem_status qrem_wasserstein_bounds(const qrem_ladder* ladder, int n, double* w_tv, double* w_quarter) {
  return guarded([&] {
    need(ladder, "ladder");
    need(w_tv, "w_tv");
    need(w_quarter, "w_quarter");
    const auto w = qrem::wasserstein_bounds(ladder->ladder, n);
    *w_tv = w.w_tv;
    *w_quarter = w.w_quarter;
  });
}

qrem_status qrem_tv_bound_multivariate(const qrem_model* model, int q, int n, double* global, double* per_cell) {
  return guarded([&] {
    need(global, "global");
    const auto b = qrem::tv_bound_multivariate(product(model), q, n);
    *global = b.global;
    if (per_cell) *per_cell = b.per_cell.value_or(std::nan(""));
  });
}

qrem_status qrem_tv_quadrature_multi(const qrem_model* model, int q, int n, int panels, double* value,
                                     double* error) {
  return guarded([&] {
    need(value, "value");
    const auto g = qrem::tv_quadrature_multi(product(model), q, n, panels);
    *value = g.value;
    if (error) *error = g.error;
  });
}

qrem_status qrem_sup_deviation(const qrem_model* model, int q, int n, int grid_size, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = qrem::sup_deviation(univariate(model), q, n, grid_size);
  });
}

// ---- goodness of fit

void qrem_gof_config_init(qrem_gof_config* config) {
  if (!config) return;
  const qrem::GofExperiment d;
  *config = {nullptr, d.q, d.n, d.k, d.sample_size, d.replications, d.alpha, d.seed, d.threads};
}

qrem_status qrem_gof_rejection_rate(const qrem_gof_config* config, qrem_gof_result* out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    qrem::GofExperiment e;
    univariate(config->model);
    e.model = config->model->model.density;
    e.q = config->q;
    e.n = config->n;
    e.k = config->k;
    e.sample_size = config->sample_size;
    e.replications = config->replications;
    e.alpha = config->alpha;
    e.seed = config->seed;
    e.threads = config->threads;
    const auto r = qrem::rejection_rate(e);
    *out = {r.rejection_rate, r.rejections, r.replications, r.standard_error, r.statistic_mean,
            r.statistic_sd,   r.p_value_mean, r.warnings.empty() ? 0 : 1};
  });
}

qrem_status qrem_chi_square_uniform_digits(const double* samples, size_t count, int q, int n, int k,
                                           double* statistic, double* p_value) {
  return guarded([&] {
    need(statistic, "statistic");
    need(p_value, "p_value");
    if (count > 0) need(samples, "samples");
    const int bits = qrem::FixedPointReal::required_bits(q, n + k - 1);
    std::vector<qrem::FixedPointReal> xs;
    xs.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (!(samples[i] >= 0.0 && samples[i] < 1.0)) qrem::fail(qrem::ErrorKind::Domain, "samples must lie in [0,1)");
      xs.push_back(qrem::FixedPointReal::from_double(samples[i], bits));
    }
    const auto r = qrem::chi_square_uniform_digits(xs, q, n, k);
    *statistic = r.statistic;
    *p_value = r.p_value;
  });
}

qrem_status qrem_chi_square_sf(double statistic, double df, double* out) {
  return guarded([&] {
    need(out, "out");
    if (!(df > 0.0)) qrem::fail(qrem::ErrorKind::Domain, "degrees of freedom must be positive");
    if (!(statistic >= 0.0)) qrem::fail(qrem::ErrorKind::Domain, "statistic must be nonnegative");
    *out = qrem::numerics::chi_square_sf(statistic, df);
  });
}

qrem_status qrem_ks_test(const qrem_model* model, const double* samples, size_t count, double* statistic,
                         double* p_value) {
  return guarded([&] {
    need(statistic, "statistic");
    need(p_value, "p_value");
    if (count > 0) need(samples, "samples");
    const auto& f = univariate(model);
    *statistic = qrem::ks_statistic(std::vector<double>(samples, samples + count), [&](double x) { return f.cdf(x); });
    *p_value = qrem::ks_p_value(*statistic, count);
  });
}

int qrem_default_threads(void) { return qrem::default_threads(); }

}  // extern "C"
