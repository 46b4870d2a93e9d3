#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "qrem/qrem.h"

namespace {

struct ModelHandle {
  qrem_model* p = nullptr;
  explicit ModelHandle(const char* spec) { REQUIRE(qrem_model_parse(spec, &p) == QREM_OK); }
  ~ModelHandle() { qrem_model_free(p); }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(qrem_version()) > 0);
  CHECK(std::string(qrem_status_name(QREM_OK)) == "ok");
  CHECK(std::string(qrem_status_name(QREM_E_BUDGET)) == "budget");
  CHECK(std::string(qrem_status_name(static_cast<qrem_status>(1234))) == "unknown");
}

TEST_CASE("parse errors leave a message and no handle") {
  qrem_model* m = reinterpret_cast<qrem_model*>(0x1);
  CHECK(qrem_model_parse("power:alpha=banana", &m) == QREM_E_PARSE);
  CHECK(m == nullptr);
  CHECK(std::string(qrem_last_error()).find("alpha") != std::string::npos);
  CHECK(qrem_model_parse(nullptr, &m) == QREM_E_INVALID_ARGUMENT);
  CHECK(qrem_model_parse("uniform", nullptr) == QREM_E_INVALID_ARGUMENT);
  qrem_model_free(nullptr);  // no-op
}

TEST_CASE("model queries") {
  ModelHandle m("benford:q=10");
  size_t need = 0;
  REQUIRE(qrem_model_spec(m.p, nullptr, 0, &need) == QREM_OK);
  std::string s(need, '\0');
  REQUIRE(qrem_model_spec(m.p, s.data(), s.size(), &need) == QREM_OK);
  CHECK(std::string(s.c_str()) == "benford:q=10");
  char small[4];
  CHECK(qrem_model_spec(m.p, small, sizeof small, &need) == QREM_E_INVALID_ARGUMENT);
  CHECK(qrem_model_dimension(m.p) == 1);

  double v = 0.0;
  REQUIRE(qrem_model_pdf(m.p, 0.0, &v) == QREM_OK);
  CHECK(v == doctest::Approx(1.0 / std::log(10.0) * (1 + 1. / 2 + 1. / 3 + 1. / 4 + 1. / 5 + 1. / 6 + 1. / 7 + 1. / 8 + 1. / 9)));
  CHECK(qrem_model_pdf(m.p, 1.0, &v) == QREM_E_DOMAIN);
  REQUIRE(qrem_model_cdf(m.p, 1.0, &v) == QREM_OK);
  CHECK(v == doctest::Approx(1.0));
  double x = 0.0;
  REQUIRE(qrem_model_quantile(m.p, 0.3, &x) == QREM_OK);
  REQUIRE(qrem_model_cdf(m.p, x, &v) == QREM_OK);
  CHECK(v == doctest::Approx(0.3).epsilon(1e-12));

  std::vector<double> a(100), b(100);
  REQUIRE(qrem_model_sample(m.p, 4, 0, a.size(), a.data()) == QREM_OK);
  REQUIRE(qrem_model_sample(m.p, 4, 0, b.size(), b.data()) == QREM_OK);
  CHECK(a == b);
  double stat = 0.0, p = 0.0;
  REQUIRE(qrem_ks_test(m.p, a.data(), a.size(), &stat, &p) == QREM_OK);
  CHECK(p > 0.0);

  REQUIRE(qrem_model_interval_infimum(m.p, 1, 1, 10, &v) == QREM_OK);
  double f01 = 0.0;
  qrem_model_pdf(m.p, 0.1, &f01);
  CHECK(v == doctest::Approx(f01));
  CHECK(qrem_model_pdf(nullptr, 0.5, &v) == QREM_E_INVALID_ARGUMENT);
}

TEST_CASE("remainder and digits") {
  ModelHandle m("power:alpha=2");
  double v = 0.0;
  REQUIRE(qrem_remainder_pdf(m.p, 2, 3, 0.75, &v) == QREM_OK);
  CHECK(v == doctest::Approx(1.0 + 0.5 / 8));
  REQUIRE(qrem_remainder_cdf(m.p, 2, 3, 0.5, &v) == QREM_OK);
  CHECK(v == doctest::Approx(0.5 - 0.25 / 8));
  CHECK(qrem_remainder_pdf(m.p, 2, 40, 0.5, &v) == QREM_E_BUDGET);
  CHECK(qrem_remainder_pdf(m.p, 1, 2, 0.5, &v) == QREM_E_DOMAIN);

  int d[4];
  REQUIRE(qrem_digits(0.8125, 2, 4, d) == QREM_OK);
  CHECK((d[0] == 1 && d[1] == 1 && d[2] == 0 && d[3] == 1));
  REQUIRE(qrem_apply_T(0.8125, 2, 2, &v) == QREM_OK);
  CHECK(v == 0.25);
  CHECK(qrem_digits(0.3, 2, 5000, d) == QREM_E_PRECISION);

  REQUIRE(qrem_benford_digit_gap(10, 1, &v) == QREM_OK);
  double p0 = 0.0, p9 = 0.0;
  qrem_benford_digit_marginal(10, 1, 0, &p0);
  qrem_benford_digit_marginal(10, 1, 9, &p9);
  CHECK(v == doctest::Approx(p0 - p9));

  ModelHandle prod("product:power:alpha=2|power:alpha=2");
  CHECK(qrem_model_dimension(prod.p) == 2);
  const double xy[2] = {0.75, 0.25};
  REQUIRE(qrem_remainder_pdf_multi(prod.p, 2, 1, xy, 2, &v) == QREM_OK);
  CHECK(v == doctest::Approx(1.25 * 0.75));
  CHECK(qrem_remainder_pdf_multi(prod.p, 2, 1, xy, 1, &v) == QREM_E_INVALID_ARGUMENT);
  CHECK(qrem_remainder_pdf(prod.p, 2, 1, 0.5, &v) == QREM_E_INVALID_ARGUMENT);
}

TEST_CASE("ladder") {
  ModelHandle m("benford:q=10");
  qrem_ladder* L = nullptr;
  REQUIRE(qrem_ladder_build(m.p, 10, 3, &L) == QREM_OK);
  CHECK(qrem_ladder_depth(L) == 3);
  CHECK(qrem_ladder_base(L) == 10);
  double p = 0.0;
  REQUIRE(qrem_ladder_prob_n_le(L, 2, &p) == QREM_OK);
  CHECK(p > 0.99);
  CHECK(qrem_ladder_prob_n_le(L, 4, &p) == QREM_E_DEPTH);
  REQUIRE(qrem_ladder_cond_prob_n_le(L, 0.5, 1, &p) == QREM_OK);
  CHECK(p <= 1.0);

  size_t need = 0;
  REQUIRE(qrem_ladder_increments(L, 2, nullptr, 0, &need) == QREM_OK);
  CHECK(need == 100);
  std::vector<double> inc(need);
  REQUIRE(qrem_ladder_increments(L, 2, inc.data(), inc.size(), &need) == QREM_OK);
  for (double c : inc) CHECK(c >= 0.0);
  std::vector<double> tiny(3);
  CHECK(qrem_ladder_increments(L, 2, tiny.data(), tiny.size(), &need) == QREM_E_INVALID_ARGUMENT);

  REQUIRE(qrem_ladder_envelope(L, 1, nullptr, 0, &need) == QREM_OK);
  std::vector<qrem_envelope_segment> env(need);
  REQUIRE(qrem_ladder_envelope(L, 1, env.data(), env.size(), &need) == QREM_OK);
  CHECK(env.size() == 10);
  CHECK(env[3].a == doctest::Approx(0.3));

  std::vector<qrem_sample> s(50), t(50);
  REQUIRE(qrem_ladder_sample(L, 1, 2, s.size(), s.data()) == QREM_OK);
  REQUIRE(qrem_ladder_sample(L, 1, 2, t.size(), t.data()) == QREM_OK);
  for (size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].x == t[i].x);
    CHECK(s[i].x >= 0.0);
    CHECK(s[i].x < 1.0);
  }
  double b = 0.0, w1 = 0.0, w4 = 0.0;
  REQUIRE(qrem_coupling_tv_bound(L, 1, &b) == QREM_OK);
  REQUIRE(qrem_wasserstein_bounds(L, 1, &w1, &w4) == QREM_OK);
  CHECK(w1 == b);
  CHECK(w4 == doctest::Approx(b / 4));
  qrem_ladder_free(L);

  ModelHandle pw("power:alpha=2");
  REQUIRE(qrem_ladder_build(pw.p, 2, 2, &L) == QREM_OK);
  CHECK(qrem_ladder_cond_prob_n_le(L, 0.0, 1, &p) == QREM_E_ZERO_DENSITY);
  CHECK(qrem_ladder_envelope(L, 1, nullptr, 0, &need) == QREM_E_SHAPE);
  qrem_ladder_free(L);
  CHECK(qrem_default_depth(2) == 12);
}

TEST_CASE("total variation") {
  ModelHandle m("power:alpha=5");
  double tv = 0.0, x0 = 0.0, q = 0.0;
  REQUIRE(qrem_tv_exact_crossing(m.p, 2, 4, &tv, &x0) == QREM_OK);
  REQUIRE(qrem_tv_quadrature(m.p, 2, 4, 1e-11, &q) == QREM_OK);
  CHECK(tv == doctest::Approx(q).epsilon(1e-9));
  CHECK(qrem_tv_exact_crossing(m.p, 2, 4, &tv, nullptr) == QREM_OK);
  double g = 0.0, c = 0.0;
  REQUIRE(qrem_tv_bound_gradient(m.p, 2, 4, 0, &g) == QREM_OK);
  REQUIRE(qrem_tv_bound_gradient(m.p, 2, 4, 1, &c) == QREM_OK);
  CHECK(tv <= c);
  CHECK(c <= g);
  double lead = 0.0, riem = 0.0;
  REQUIRE(qrem_tv_bound_second_order(m.p, 2, 4, QREM_XI_CELL_SUP, &lead, &riem) == QREM_OK);
  CHECK(lead > 0.0);
  CHECK(qrem_tv_bound_refined(m.p, 2, 4, &g) == QREM_E_DOMAIN);

  ModelHandle sing("power:alpha=0.5");
  ModelHandle proxy("clip:eps=0.001:power:alpha=0.5");
  double val = 0.0, l1 = 0.0, pc = 0.0;
  REQUIRE(qrem_tv_bound_mixed(sing.p, proxy.p, 2, 5, &val, &l1, &pc) == QREM_OK);
  CHECK(val >= pc);
  CHECK(qrem_tv_bound_gradient(sing.p, 2, 4, 0, &g) == QREM_E_UNSUPPORTED);

  qrem_tv_options o;
  qrem_tv_options_init(&o);
  CHECK(o.xi_rule == QREM_XI_MIDPOINT);
  CHECK(o.tolerance > 0.0);
  o.proxy = proxy.p;
  qrem_tv_report r;
  REQUIRE(qrem_tv_report_compute(sing.p, 2, 5, &o, &r) == QREM_OK);
  CHECK(r.has_exact == 1);
  CHECK(r.consistent == 1);
  CHECK(std::string(r.method) == "crossing");
  bool mixed = false;
  for (size_t i = 0; i < r.bound_count; ++i) mixed |= std::string(r.bounds[i].name) == "mixed";
  CHECK(mixed);

  ModelHandle prod("product:power:alpha=2|power:alpha=2");
  double glob = 0.0, cell = 0.0, value = 0.0, err = 0.0;
  REQUIRE(qrem_tv_bound_multivariate(prod.p, 2, 2, &glob, &cell) == QREM_OK);
  REQUIRE(qrem_tv_quadrature_multi(prod.p, 2, 2, 32, &value, &err) == QREM_OK);
  CHECK(value <= glob);
  CHECK_FALSE(std::isnan(cell));
  double sup = 0.0;
  REQUIRE(qrem_sup_deviation(m.p, 2, 3, 100, &sup) == QREM_OK);
  CHECK(sup > 0.0);
}

TEST_CASE("goodness of fit") {
  ModelHandle m("uniform");
  qrem_gof_config cfg;
  qrem_gof_config_init(&cfg);
  CHECK(cfg.sample_size == 1000);
  CHECK(cfg.alpha == 0.05);
  cfg.model = m.p;
  cfg.replications = 200;
  cfg.k = 2;
  qrem_gof_result r;
  REQUIRE(qrem_gof_rejection_rate(&cfg, &r) == QREM_OK);
  CHECK(r.replications == 200);
  CHECK(r.rejection_rate < 0.15);
  CHECK(r.low_expected_count == 0);
  cfg.model = nullptr;
  CHECK(qrem_gof_rejection_rate(&cfg, &r) == QREM_E_INVALID_ARGUMENT);

  const double xs[4] = {0.1, 0.3, 0.6, 0.9};
  double stat = 0.0, p = 0.0;
  REQUIRE(qrem_chi_square_uniform_digits(xs, 4, 2, 1, 1, &stat, &p) == QREM_OK);
  CHECK(stat == 0.0);
  REQUIRE(qrem_chi_square_sf(3.841458820694124, 1, &p) == QREM_OK);
  CHECK(p == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(qrem_default_threads() >= 1);
}
