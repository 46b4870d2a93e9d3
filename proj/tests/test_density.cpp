#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "density.hpp"
#include "errors.hpp"
#include "numerics/rng.hpp"

using namespace qrem;

namespace {

const std::vector<std::string> kSpecs = {
    "uniform",          "benford:q=2",      "benford:q=3",      "benford:q=10",       "power:alpha=0.1",
    "power:alpha=0.5",  "power:alpha=1",    "power:alpha=1.5",  "power:alpha=2",      "power:alpha=5",
    "power:alpha=10",   "pwc:q=2,m=2,w=0.4;0.4;1.6;1.6",        "punctured:x0=0.25",  "clip:eps=0.01:power:alpha=0.5",
};

double oracle_integral(const UnitDensity& f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([&f](double x) { return f.density_at(x); }, a, b, 1e-12);
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("every model integrates to one and its cdf matches the integral") {
  for (const auto& spec : kSpecs) {
    CAPTURE(spec);
    const auto f = parse_density(spec);
    if (spec.rfind("pwc", 0) == 0 || spec.rfind("punctured", 0) == 0) {
      // kinks: split at the level-2 boundaries
      double total = 0.0;
      for (int j = 0; j < 4; ++j) total += oracle_integral(*f, j / 4.0, (j + 1) / 4.0);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    } else if (spec.rfind("clip", 0) == 0) {
      const double total = oracle_integral(*f, 0.0, 0.01) + oracle_integral(*f, 0.01, 1.0);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    } else {
      CHECK(oracle_integral(*f, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
      for (double a : {0.05, 0.3, 0.6}) {
        const double b = a + 0.33;
        CHECK(f->mass(a, b) == doctest::Approx(oracle_integral(*f, a, b)).epsilon(1e-10));
      }
    }
    CHECK(f->cdf(0.0) == 0.0);
    CHECK(f->cdf(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("quantile inverts the cdf") {
  for (const auto& spec : kSpecs) {
    CAPTURE(spec);
    const auto f = parse_density(spec);
    for (double u : {1e-9, 0.01, 0.25, 0.5, 0.77, 0.999}) {
      const double x = f->quantile(u);
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
      CHECK(f->cdf(x) == doctest::Approx(u).epsilon(1e-11));
    }
  }
}

TEST_CASE("spec strings round trip") {
  for (const auto& spec : kSpecs) {
    const auto f = parse_density(spec);
    CHECK(parse_density(f->spec())->spec() == f->spec());
  }
  const auto m = parse_model("product:power:alpha=2|benford:q=10");
  CHECK(m.dimension() == 2);
  CHECK(parse_model(m.spec()).spec() == m.spec());
}

TEST_CASE("malformed specs are parse errors") {
  for (const char* bad : {"", "bogus", "power", "power:alpha=x", "power:beta=2", "benford:q=10,q=3",
                          "pwc:q=2,m=1", "clip:eps=0.1", "product:", "uniform:q=2"}) {
    CAPTURE(bad);
    const ErrorKind k = kind_of([&] { parse_model(bad); });
    CHECK((k == ErrorKind::Parse || k == ErrorKind::Domain));
  }
}

TEST_CASE("domain checks") {
  CHECK(kind_of([] { BenfordDensity(1); }) == ErrorKind::Domain);
  CHECK(kind_of([] { PowerDensity(0.0); }) == ErrorKind::Domain);
  CHECK(kind_of([] { PowerDensity(-1.0); }) == ErrorKind::Domain);
  CHECK(kind_of([] { PiecewiseConstantDensity(2, 1, {0.5, 0.5}); }) == ErrorKind::InvalidArgument);  // mass != 1
  CHECK(kind_of([] { PiecewiseConstantDensity(2, 1, {-1.0, 3.0}); }) == ErrorKind::InvalidArgument);
  const auto f = parse_density("benford:q=10");
  CHECK(kind_of([&] { f->pdf(1.0); }) == ErrorKind::Domain);
  CHECK(kind_of([&] { f->pdf(-0.1); }) == ErrorKind::Domain);
  CHECK(kind_of([&] { f->cdf(1.5); }) == ErrorKind::Domain);
  CHECK(kind_of([&] { f->quantile(2.0); }) == ErrorKind::Domain);
  CHECK(kind_of([&] { f->interval_infimum(0, 1, 10); }) == ErrorKind::Domain);
  CHECK(kind_of([&] { f->interval_infimum(11, 1, 10); }) == ErrorKind::Domain);
}

TEST_CASE("power singularity is reported by a sentinel") {
  PowerDensity p(0.5);
  CHECK(p.pdf(0.0) == UnitDensity::kSingularSentinel);
  CHECK(p.singularity_exponent() == 0.5);
  CHECK_FALSE(p.deriv_sup().has_value());
  CHECK(PowerDensity(2.0).deriv_sup().value() == doctest::Approx(2.0));
  CHECK(PowerDensity(5.0).deriv_sup().value() == doctest::Approx(20.0));
  CHECK(PowerDensity(1.5).deriv_l1().value() == doctest::Approx(1.5));
}

TEST_CASE("derivative metadata bounds the derivative") {
  for (const auto& spec : kSpecs) {
    const auto f = parse_density(spec);
    const auto d1 = f->deriv_sup();
    if (!d1) continue;
    CAPTURE(spec);
    for (int i = 1; i < 1000; ++i) {
      const double x = i / 1000.0;
      CHECK(std::fabs(f->derivative_at(x)) <= *d1 * (1 + 1e-12) + 1e-12);
      // derivative agrees with a central difference
      if (spec.rfind("pwc", 0) != 0 && spec.rfind("punct", 0) != 0 && spec.rfind("clip", 0) != 0 && x > 0.01 &&
          x < 0.99) {
        const double h = 1e-6;
        const double fd = (f->density_at(x + h) - f->density_at(x - h)) / (2 * h);
        CHECK(f->derivative_at(x) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
      }
    }
  }
  BenfordDensity b(10);
  CHECK(b.deriv_l1().value() == doctest::Approx(b.density_at(0.0) - b.density_at(1.0)).epsilon(1e-13));
}

TEST_CASE("cell infima are certified lower bounds and attained for monotone models") {
  numerics::Rng rng(5);
  for (const auto& spec : kSpecs) {
    CAPTURE(spec);
    const auto f = parse_density(spec);
    for (int q : {2, 3, 10}) {
      for (int n : {0, 1, 2}) {
        const std::uint64_t cells = static_cast<std::uint64_t>(std::pow(q, n));
        for (std::uint64_t k = 1; k <= cells; ++k) {
          const double a = static_cast<double>(k - 1) / cells, b = static_cast<double>(k) / cells;
          const double inf = f->interval_infimum(k, n, q);
          double grid_min = INFINITY;
          for (int i = 0; i < 50; ++i) grid_min = std::min(grid_min, f->density_at(a + (b - a) * rng.uniform()));
          grid_min = std::min(grid_min, f->density_at(a));
          CHECK(inf <= grid_min * (1 + 1e-12) + 1e-15);
          if (f->monotonicity() == Monotonicity::Increasing) CHECK(inf == doctest::Approx(f->density_at(a)));
        }
      }
    }
  }
  // the puncture makes the containing cells vanish
  PuncturedUniformDensity p(0.25);
  CHECK(p.interval_infimum(2, 2, 2) == 0.0);
  CHECK(p.interval_infimum(1, 2, 2) == 1.0);
}

TEST_CASE("general models need metadata to certify infima") {
  FunctionDensity::Parts parts;
  parts.pdf = [](double x) { return 1.0 + 0.5 * std::sin(6.283185307179586 * x); };
  parts.cdf = [](double x) { return x + 0.5 * (1.0 - std::cos(6.283185307179586 * x)) / 6.283185307179586; };
  FunctionDensity bare(parts);
  CHECK(kind_of([&] { bare.interval_infimum(1, 1, 2); }) == ErrorKind::Unsupported);
  parts.deriv_sup = 0.5 * 6.283185307179586;
  FunctionDensity meta(parts);
  const double inf = meta.interval_infimum(2, 1, 2);  // [1/2, 1): min 0.5 at 3/4
  CHECK(inf <= 0.5 + 1e-12);
  CHECK(inf >= 0.5 - 1e-3);
}

TEST_CASE("product densities") {
  const auto m = parse_model("product:power:alpha=2|power:alpha=2");
  REQUIRE(m.product);
  const double x[] = {0.25, 0.5};
  CHECK(m.product->pdf(x) == doctest::Approx(0.5 * 1.0));
  // ||grad|| for 2x * 2y: sqrt((2*2)^2 + (2*2)^2)
  CHECK(m.product->gradient_sup().value() == doctest::Approx(std::sqrt(32.0)));
  CHECK_FALSE(parse_model("product:power:alpha=0.5|uniform").product->gradient_sup().has_value());
}

TEST_CASE("clipped proxy") {
  const auto base = parse_density("power:alpha=0.5");
  ClippedDensity g(base, 0.01);
  CHECK(g.density_at(0.0) == doctest::Approx(g.density_at(0.01)));
  CHECK(g.deriv_sup().has_value());
  CHECK(g.cdf(1.0) == doctest::Approx(1.0).epsilon(1e-13));
}
