#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "errors.hpp"
#include "tv_metrics.hpp"

using namespace qrem;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

// (1/2) int |f_n - 1| by tanh-sinh, split at the crossing found by the oracle's own bisection.
double tv_oracle(const UnitDensity& f, int q, int n) {
  auto g = [&](double x) { return remainder_density_at(f, q, n, x) - 1.0; };
  double lo = 1e-12, hi = 1.0 - 1e-12;
  double glo = g(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm > 0) == (glo > 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  const double x0 = 0.5 * (lo + hi);
  boost::math::quadrature::tanh_sinh<double> ts;
  auto a = [&](double x) { return std::fabs(g(x)); };
  return 0.5 * (ts.integrate(a, 0.0, x0, 1e-13) + ts.integrate(a, x0, 1.0, 1e-13));
}

}  // namespace

TEST_CASE("power alpha=2: d_TV = q^-n / 4") {
  PowerDensity f(2.0);
  for (int q : {2, 3, 10}) {
    for (int n = 0; n <= 5; ++n) {
      const double expect = 0.25 * std::pow(q, -n);
      const auto c = tv_crossing(f, q, n);
      CHECK(c.tv == doctest::Approx(expect).epsilon(1e-12));
      CHECK(c.x0 == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(tv_quadrature(f, q, n) == doctest::Approx(expect).epsilon(1e-9));
    }
  }
}

TEST_CASE("crossing and quadrature agree with an independent oracle") {
  for (const char* spec : {"benford:q=10", "benford:q=2", "power:alpha=0.5", "power:alpha=1.5", "power:alpha=5",
                           "power:alpha=10"}) {
    CAPTURE(spec);
    const auto f = parse_density(spec);
    const int q = spec[0] == 'b' ? std::stoi(std::string(spec).substr(10)) : 2;
    for (int n : {0, 1, 3, 6}) {
      if (q == 10 && n > 4) continue;
      CAPTURE(n);
      const double ref = tv_oracle(*f, q, n);
      CHECK(tv_exact_crossing(*f, q, n) == doctest::Approx(ref).epsilon(1e-8));
      CHECK(tv_quadrature(*f, q, n, 1e-11) == doctest::Approx(ref).epsilon(1e-8));
    }
  }
  // the hard singular case goes through the substitution
  PowerDensity p(0.1);
  CHECK(tv_quadrature(p, 2, 3) == doctest::Approx(tv_exact_crossing(p, 2, 3)).epsilon(1e-8));
}

TEST_CASE("uniform remainders have zero distance") {
  CHECK(tv_exact_crossing(*parse_density("uniform"), 2, 3) == 0.0);
  const auto w = parse_density("pwc:q=2,m=2,w=0.4;1.6;0.4;1.6");
  CHECK(tv_quadrature(*w, 2, 2) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(tv_quadrature(*w, 2, 1) == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(kind_of([&] { tv_bound_gradient(*w, 2, 3, false); }) == ErrorKind::Unsupported);
  CHECK(tv_bound_gradient(*parse_density("uniform"), 2, 3, false) == 0.0);
}

TEST_CASE("crossing needs a monotone model") {
  const auto p = parse_density("punctured:x0=0.3");
  CHECK(kind_of([&] { tv_crossing(*p, 2, 1); }) == ErrorKind::Shape);
  CHECK(tv_quadrature(*p, 2, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("gradient bounds dominate and decay like q^-n") {
  for (double alpha : {2.0, 5.0, 10.0}) {
    PowerDensity f(alpha);
    for (int n = 0; n <= 10; ++n) {
      const double exact = tv_exact_crossing(f, 2, n);
      const double cell = tv_bound_gradient(f, 2, n, true);
      const double global = tv_bound_gradient(f, 2, n, false);
      CHECK(exact <= cell + 1e-12);
      CHECK(cell <= global + 1e-12);
      CHECK(global == doctest::Approx(*f.deriv_sup() / 6.0 * std::pow(2.0, -n)).epsilon(1e-14));
    }
  }
  CHECK(kind_of([] { tv_bound_gradient(PowerDensity(0.5), 2, 3, false); }) == ErrorKind::Unsupported);
}

TEST_CASE("mixed bound through a clipped proxy") {
  const auto f = parse_density("power:alpha=0.5");
  const auto g = std::make_shared<ClippedDensity>(f, 1e-3);
  for (int n : {2, 5, 8}) {
    const auto m = tv_bound_mixed(*f, *g, 2, n);
    const double exact = tv_exact_crossing(*f, 2, n);
    CHECK(exact <= m.value + 1e-12);
    REQUIRE(m.per_cell);
    CHECK(exact <= *m.per_cell + 1e-12);
    CHECK(*m.per_cell <= m.value + 1e-12);
    // ||f - g||_1 = 2 (F(eps) - eps g(0)) for this decreasing f with a flat cap
    CHECK(m.l1_distance > 0.0);
    CHECK(m.l1_distance < 0.1);
  }
}

TEST_CASE("second-order leading term") {
  PowerDensity f2(2.0);
  for (int n = 1; n <= 6; ++n) {
    for (auto rule : {XiRule::Left, XiRule::Midpoint, XiRule::Right, XiRule::CellSup}) {
      const auto s = tv_bound_second_order(f2, 2, n, rule);
      CHECK(s.leading == doctest::Approx(0.25 * std::pow(2.0, -n)).epsilon(1e-13));
      CHECK(s.riemann_limit == doctest::Approx(0.25 * std::pow(2.0, -n)).epsilon(1e-13));
    }
  }
  for (double alpha : {5.0, 10.0}) {
    PowerDensity f(alpha);
    double prev = INFINITY;
    for (int n = 4; n <= 10; ++n) {
      const double gap = std::fabs(std::log(tv_bound_second_order(f, 2, n, XiRule::CellSup).leading) -
                                   std::log(tv_exact_crossing(f, 2, n)));
      CHECK(gap <= prev + 1e-12);
      prev = gap;
    }
    CHECK(prev < 0.1);
    // left/right sums bracket the midpoint sum for monotone f'
    const auto l = tv_bound_second_order(f, 2, 6, XiRule::Left).leading;
    const auto m = tv_bound_second_order(f, 2, 6, XiRule::Midpoint).leading;
    const auto r = tv_bound_second_order(f, 2, 6, XiRule::Right).leading;
    CHECK(l <= m);
    CHECK(m <= r);
  }
  CHECK(kind_of([] { tv_bound_second_order(PowerDensity(0.5), 2, 3); }) == ErrorKind::Unsupported);
  CHECK(parse_xi_rule("cell_sup") == XiRule::CellSup);
  CHECK(std::string(to_string(XiRule::Left)) == "left");
  CHECK(kind_of([] { parse_xi_rule("centre"); }) == ErrorKind::Parse);
}

TEST_CASE("refined bound for 1 < alpha < 2") {
  for (double alpha : {1.2, 1.5, 1.9}) {
    PowerDensity f(alpha);
    for (int n : {1, 4, 8}) {
      const double b = tv_bound_refined_low_alpha(f, 2, n);
      CHECK(tv_exact_crossing(f, 2, n) <= b);
      const double h = std::pow(2.0, -n);
      CHECK(b == doctest::Approx(h * (0.5 * f.density_at(h) + alpha / 6.0)).epsilon(1e-14));
    }
  }
  CHECK(kind_of([] { tv_bound_refined_low_alpha(PowerDensity(2.5), 2, 3); }) == ErrorKind::Domain);
  CHECK(kind_of([] { tv_bound_refined_low_alpha(BenfordDensity(2), 2, 3); }) == ErrorKind::Unsupported);
}

TEST_CASE("coupling and wasserstein bounds") {
  const auto f = parse_density("benford:q=10");
  const auto L = InfimumLadder::build(f, 10, 4);
  for (int n = 0; n <= 4; ++n) {
    CHECK(tv_exact_crossing(*f, 10, n) <= coupling_tv_bound(L, n) + 1e-12);
    const auto w = wasserstein_bounds(L, n);
    CHECK(w.w_tv == coupling_tv_bound(L, n));
    CHECK(w.w_quarter == doctest::Approx(w.w_tv / 4));
  }
}

TEST_CASE("multivariate tensor quadrature and bounds") {
  const auto m = parse_model("product:power:alpha=2|power:alpha=2");
  boost::math::quadrature::tanh_sinh<double> ts;
  for (int n = 1; n <= 3; ++n) {
    const double h = std::pow(2.0, -n);
    // f_n(x, y) = (1 + (2x-1) h)(1 + (2y-1) h); integrate |f_n - 1| / 2 with a cut at the zero curve
    auto inner = [&](double x) {
      const double a = 1.0 + (2 * x - 1) * h;
      const double y0 = 0.5 * (1.0 + (1.0 / a - 1.0) / h);  // a (1 + (2 y0 - 1) h) = 1
      auto g = [&](double y) { return std::fabs(a * (1.0 + (2 * y - 1) * h) - 1.0); };
      if (y0 <= 0.0 || y0 >= 1.0) return ts.integrate(g, 0.0, 1.0, 1e-13);
      return ts.integrate(g, 0.0, y0, 1e-13) + ts.integrate(g, y0, 1.0, 1e-13);
    };
    const double ref = 0.5 * (ts.integrate(inner, 0.0, 0.5, 1e-12) + ts.integrate(inner, 0.5, 1.0, 1e-12));
    const auto grid = tv_quadrature_multi(*m.product, 2, n, 64);
    CHECK(grid.value == doctest::Approx(ref).epsilon(1e-6));
    CHECK(grid.error < 1e-6);
    const auto b = tv_bound_multivariate(*m.product, 2, n);
    CHECK(b.global == doctest::Approx(0.5 * std::sqrt(2.0 / 3.0) * h * std::sqrt(32.0)).epsilon(1e-13));
    CHECK(grid.value <= b.global);
    REQUIRE(b.per_cell);
    CHECK(grid.value <= *b.per_cell + 1e-12);
  }
  // one factor: agrees with the univariate distance
  const auto one = parse_model("product:power:alpha=5");
  CHECK(tv_quadrature_multi(*one.product, 2, 3, 64).value ==
        doctest::Approx(tv_exact_crossing(PowerDensity(5.0), 2, 3)).epsilon(1e-8));
  // a uniform factor contributes nothing
  const auto mixed = parse_model("product:uniform|power:alpha=5");
  for (int n : {1, 2, 4}) {
    CHECK(tv_quadrature_multi(*mixed.product, 2, n, 64).value ==
          doctest::Approx(tv_exact_crossing(PowerDensity(5.0), 2, n)).epsilon(1e-8));
  }
  CHECK(kind_of([&] { tv_quadrature_multi(*m.product, 2, 1, 1); }) == ErrorKind::Domain);
}

TEST_CASE("sup deviation on a grid") {
  PowerDensity f(2.0);
  CHECK(sup_deviation(f, 2, 3, 1000) == doctest::Approx((1.0 - 1.0 / 1000) / 8.0).epsilon(1e-12));
}

TEST_CASE("report bundles the exact value with every applicable bound") {
  const auto f = parse_density("benford:q=10");
  const auto L = InfimumLadder::build(f, 10, 3);
  TvReportOptions o;
  o.ladder = &L;
  const auto r = tv_report(*f, 10, 2, o);
  REQUIRE(r.exact);
  CHECK(r.method == "crossing");
  CHECK(r.consistent);
  CHECK(r.bound("gradient_global"));
  CHECK(r.bound("gradient_percell"));
  CHECK(r.bound("coupling"));
  CHECK_FALSE(r.bound("refined"));
  CHECK(r.second_order);
  CHECK(r.wasserstein);
  for (const auto& b : r.bounds) {
    CHECK(b.value <= 1.0);
    CHECK(*r.exact <= b.value + 1e-9);
  }
  // singular model: no gradient bounds, the proxy supplies the mixed ones
  TvReportOptions p;
  p.proxy = std::make_shared<ClippedDensity>(parse_density("power:alpha=0.5"), 1e-3);
  const auto s = tv_report(PowerDensity(0.5), 2, 4, p);
  CHECK_FALSE(s.bound("gradient_global"));
  CHECK(s.bound("mixed"));
  CHECK(s.consistent);
}
