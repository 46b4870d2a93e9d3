#include "tv_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "numerics/quadrature.hpp"
#include "numerics/roots.hpp"
#include "numerics/summation.hpp"

namespace qrem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kMaxBreakpoints = 4096;

/// f_n == 1 identically: flat models, or piecewise constant at a level <= n.
bool uniform_after(const UnitDensity& f, int q, int n) {
  if (auto d = f.deriv_sup(); d && *d == 0.0) return true;
  const auto lvl = f.breakpoint_level();
  return lvl && f.breakpoint_base() == q && *lvl <= n;
}

bool is_monotone(const UnitDensity& f) {
  const auto m = f.monotonicity();
  return m == Monotonicity::Increasing || m == Monotonicity::Decreasing;
}

/// Level boundaries of the remainder of a piecewise-constant model, when few.
std::vector<double> level_breakpoints(const UnitDensity& f, int q, int n) {
  std::vector<double> cuts;
  const auto lvl = f.breakpoint_level();
  if (!lvl || f.breakpoint_base() != q || *lvl <= n) return cuts;
  const int L = *lvl - n;
  std::uint64_t cells = 1;
  for (int i = 0; i < L; ++i) {
    cells *= static_cast<std::uint64_t>(q);
    if (cells > kMaxBreakpoints) return {};
  }
  for (std::uint64_t c = 1; c < cells; ++c) cuts.push_back(static_cast<double>(c) / static_cast<double>(cells));
  return cuts;
}

double remainder_derivative_at(const UnitDensity& f, int q, int n, double x) {
  const std::uint64_t cells = cell_count(q, n);
  const double scale = static_cast<double>(cells);
  numerics::CompensatedSum sum;
  for (std::uint64_t j = 0; j < cells; ++j) sum += f.derivative_at((static_cast<double>(j) + x) / scale);
  return sum.value() / (scale * scale);
}

bool has_derivative(const UnitDensity& f) {
  try {
    (void)f.derivative_at(0.5);
    return true;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Unsupported) return false;
    throw;
  }
}

}  // namespace

const char* to_string(XiRule r) {
  switch (r) {
    case XiRule::Left: return "left";
    case XiRule::Midpoint: return "midpoint";
    case XiRule::Right: return "right";
    case XiRule::CellSup: return "cell_sup";
  }
  return "?";
}

XiRule parse_xi_rule(const std::string& text) {
  if (text == "left") return XiRule::Left;
  if (text == "midpoint") return XiRule::Midpoint;
  if (text == "right") return XiRule::Right;
  if (text == "cell_sup") return XiRule::CellSup;
  fail(ErrorKind::Parse, "unknown xi rule '" + text + "' (left, midpoint, right, cell_sup)");
}

// ---------------------------------------------------------------------------
// exact values

CrossingResult tv_crossing(const UnitDensity& model, int q, int n) {
  cell_count(q, n);
  CrossingResult r;
  if (uniform_after(model, q, n)) {
    r.x0 = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  if (!is_monotone(model)) {
    fail(ErrorKind::Shape, "crossing method needs a strictly monotone model; " + model.spec() + " is " +
                               to_string(model.monotonicity()));
  }
  auto g = [&](double x) { return remainder_density_at(model, q, n, x) - 1.0; };
  const auto bracket = numerics::scan_for_sign_change(g, 0.0, 1.0, 64);
  if (!bracket) fail(ErrorKind::Shape, "f_n - 1 does not change sign on [0,1]");
  const auto [lo, hi] = *bracket;

  numerics::RootOptions opts;
  opts.x_rel_tol = 1e-14;
  opts.max_iterations = 200;
  numerics::RootResult root;
  if (has_derivative(model)) {
    auto dg = [&](double x) { return remainder_derivative_at(model, q, n, x); };
    root = numerics::newton_bisect(g, dg, lo, hi, 0.5, opts);
  } else {
    root = numerics::bisect(g, lo, hi, 1e-15);
  }
  r.x0 = root.x;
  r.iterations = root.iterations;
  r.bisection_steps = root.bisection_steps;
  r.tv = std::fabs(remainder_cumulative_at(model, q, n, root.x) - root.x);
  return r;
}

double tv_exact_crossing(const UnitDensity& model, int q, int n) { return tv_crossing(model, q, n).tv; }

double tv_quadrature(const UnitDensity& model, int q, int n, double tol) {
  if (!(tol > 0.0)) fail(ErrorKind::Domain, "tolerance must be positive");
  cell_count(q, n);
  if (uniform_after(model, q, n)) return 0.0;
  auto integrand = [&](double t) { return std::fabs(remainder_density_at(model, q, n, t) - 1.0); };
  numerics::QuadratureOptions opts;
  opts.abs_tol = 2.0 * tol;
  opts.left_singularity_exponent = model.singularity_exponent();
  const auto cuts = level_breakpoints(model, q, n);
  try {
    return 0.5 * numerics::integrate(integrand, 0.0, 1.0, opts, cuts).value;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Tolerance) throw;
    throw Error(ErrorKind::Tolerance, e.what(), e.estimate() ? std::optional(0.5 * *e.estimate()) : std::nullopt);
  }
}

// ---------------------------------------------------------------------------
// bounds

namespace {

double per_cell_gradient_sum(const UnitDensity& g, int q, int n) {
  const std::uint64_t cells = cell_count(q, n);
  const double scale = static_cast<double>(cells);
  numerics::CompensatedSum sum;
  for (std::uint64_t j = 0; j < cells; ++j) {
    const double s = g.abs_deriv_sup_on(static_cast<double>(j) / scale, static_cast<double>(j + 1) / scale);
    if (!std::isfinite(s)) {
      fail(ErrorKind::Unsupported, "model " + g.spec() + " has an unbounded derivative on cell " + std::to_string(j));
    }
    sum += s;
  }
  return sum.value();
}

double global_deriv_sup(const UnitDensity& g) {
  const auto d = g.deriv_sup();
  if (!d) fail(ErrorKind::Unsupported, "model " + g.spec() + " has no finite derivative bound");
  return *d;
}

}  // namespace

double tv_bound_gradient(const UnitDensity& model, int q, int n, bool per_cell) {
  const std::uint64_t cells = cell_count(q, n, per_cell ? kDefaultTermBudget : std::uint64_t{1} << 62);
  const double scale = static_cast<double>(cells);
  if (!per_cell) return global_deriv_sup(model) / (6.0 * scale);
  return per_cell_gradient_sum(model, q, n) / (6.0 * scale * scale);
}

MixedBound tv_bound_mixed(const UnitDensity& f, const UnitDensity& g, int q, int n, double tol) {
  const double scale = static_cast<double>(cell_count(q, n, std::uint64_t{1} << 62));
  const double gsup = global_deriv_sup(g);

  std::vector<double> cuts;
  if (const auto* clip = dynamic_cast<const ClippedDensity*>(&g)) cuts.push_back(clip->eps());
  for (const auto* d : {&f, &g}) {
    for (double c : level_breakpoints(*d, q, 0)) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  numerics::QuadratureOptions opts;
  opts.abs_tol = tol;
  opts.left_singularity_exponent = std::min(f.singularity_exponent(), g.singularity_exponent());
  auto diff = [&](double t) { return std::fabs(f.density_at(t) - g.density_at(t)); };

  MixedBound b;
  b.l1_distance = numerics::integrate(diff, 0.0, 1.0, opts, cuts).value;
  b.value = 0.5 * b.l1_distance + gsup / (6.0 * scale);
  try {
    b.per_cell = 0.5 * b.l1_distance + per_cell_gradient_sum(g, q, n) / (6.0 * scale * scale);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Unsupported && e.kind() != ErrorKind::Budget) throw;
  }
  return b;
}

SecondOrderEstimate tv_bound_second_order(const UnitDensity& model, int q, int n, XiRule rule) {
  if (!model.deriv2_sup()) {
    fail(ErrorKind::Unsupported, "model " + model.spec() + " has no bound on f''; the expansion does not apply");
  }
  const std::uint64_t cells = cell_count(q, n);
  const double scale = static_cast<double>(cells);
  SecondOrderEstimate e;
  e.rule = rule;
  e.caveat = "asymptotic: excludes O(||f''||_inf q^-2n)";
  double s = 0.0;
  if (rule == XiRule::CellSup) {
    s = per_cell_gradient_sum(model, q, n);
  } else {
    const double offset = rule == XiRule::Left ? 0.0 : rule == XiRule::Right ? 1.0 : 0.5;
    numerics::CompensatedSum sum;
    for (std::uint64_t j = 0; j < cells; ++j) sum += model.derivative_at((static_cast<double>(j) + offset) / scale);
    s = std::fabs(sum.value());
  }
  e.leading = s / (8.0 * scale * scale);
  e.riemann_limit = std::fabs(model.density_at(1.0) - model.density_at(0.0)) / (8.0 * scale);
  return e;
}

double tv_bound_refined_low_alpha(const UnitDensity& model, int q, int n) {
  const auto* power = dynamic_cast<const PowerDensity*>(&model);
  if (!power) fail(ErrorKind::Unsupported, "the refined bound is defined for the power model only");
  const double alpha = power->alpha();
  if (!(alpha > 1.0 && alpha < 2.0)) fail(ErrorKind::Domain, "the refined bound needs 1 < alpha < 2");
  const double scale = static_cast<double>(cell_count(q, n, std::uint64_t{1} << 62));
  const double first_cell_sup = model.density_at(1.0 / scale);
  return (0.5 * first_cell_sup + *model.deriv_l1() / 6.0) / scale;
}

double coupling_tv_bound(const InfimumLadder& ladder, int n) { return ladder.prob_n_gt(n); }

WassersteinBounds wasserstein_bounds(const InfimumLadder& ladder, int n) {
  const double t = ladder.prob_n_gt(n);
  return {t, t / 4.0};
}

MultivariateBound tv_bound_multivariate(const ProductDensity& model, int q, int n) {
  const auto grad = model.gradient_sup();
  if (!grad) fail(ErrorKind::Unsupported, "every factor needs deriv_sup and pdf_sup for the gradient bound");
  const std::size_t k = model.dimension();
  const double c = 0.5 * std::sqrt(static_cast<double>(k) / 3.0);
  const std::uint64_t cells = cell_count(q, n, std::uint64_t{1} << 62);
  const double scale = static_cast<double>(cells);

  MultivariateBound b;
  b.global = c * *grad / scale;

  // Per-cell form: needs q^(nk) cells within budget and finite per-cell sups.
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (total > kDefaultTermBudget / cells) return b;
    total *= cells;
  }
  std::vector<std::vector<double>> dsup(k), fsup(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& f = *model.factors()[i];
    for (std::uint64_t j = 0; j < cells; ++j) {
      const double a = static_cast<double>(j) / scale, e = static_cast<double>(j + 1) / scale;
      double d = 0.0, s = 0.0;
      try {
        d = f.abs_deriv_sup_on(a, e);
        s = f.pdf_sup_on(a, e);
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::Unsupported) throw;
        return b;
      }
      if (!std::isfinite(d) || !std::isfinite(s)) return b;
      dsup[i].push_back(d);
      fsup[i].push_back(s);
    }
  }
  std::vector<std::uint64_t> idx(k, 0);
  numerics::CompensatedSum sum;
  for (std::uint64_t t = 0; t < total; ++t) {
    double sq = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double term = dsup[i][idx[i]];
      for (std::size_t l = 0; l < k; ++l) {
        if (l != i) term *= fsup[l][idx[l]];
      }
      sq += term * term;
    }
    sum += std::sqrt(sq);
    for (std::size_t i = 0; i < k && ++idx[i] == cells; ++i) idx[i] = 0;
  }
  b.per_cell = c * sum.value() / std::pow(scale, static_cast<double>(k + 1));
  return b;
}

// ---------------------------------------------------------------------------

namespace {

struct AxisRule {
  std::vector<double> values;   // f_n at the nodes
  std::vector<double> weights;
};

AxisRule axis_rule(const UnitDensity& f, int q, int n, int panels) {
  std::vector<double> cuts{0.0};
  if (is_monotone(f) && !uniform_after(f, q, n)) {
    try {
      const double x0 = tv_crossing(f, q, n).x0;
      if (x0 > 0.0 && x0 < 1.0) cuts.push_back(x0);
    } catch (const Error&) {
    }
  }
  cuts.push_back(1.0);

  std::vector<double> gx, gw;
  numerics::gauss_legendre_rule(15, gx, gw);
  const double beta = f.singularity_exponent();
  AxisRule r;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    const int m = std::max(1, static_cast<int>(std::lround(panels * (b - a))));
    const bool substitute = s == 0 && beta < 1.0;
    for (int p = 0; p < m; ++p) {
      const double pa = static_cast<double>(p) / m, pb = static_cast<double>(p + 1) / m;
      for (std::size_t i = 0; i < gx.size(); ++i) {
        const double u = 0.5 * (pa + pb) + 0.5 * (pb - pa) * gx[i];
        double t = a + (b - a) * u, w = 0.5 * (pb - pa) * gw[i] * (b - a);
        if (substitute) {
          // t = a + (b - a) u^(1/beta)
          t = a + (b - a) * std::pow(u, 1.0 / beta);
          w *= std::pow(u, 1.0 / beta - 1.0) / beta;
        }
        r.values.push_back(remainder_density_at(f, q, n, t));
        r.weights.push_back(w);
      }
    }
  }
  return r;
}

double tensor_sum(const std::vector<AxisRule>& axes) {
  const std::size_t k = axes.size();
  std::vector<std::size_t> idx(k, 0);
  std::uint64_t total = 1;
  for (const auto& a : axes) total *= a.values.size();
  numerics::CompensatedSum sum;
  for (std::uint64_t t = 0; t < total; ++t) {
    double v = 1.0, w = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      v *= axes[i].values[idx[i]];
      w *= axes[i].weights[idx[i]];
    }
    sum += w * std::fabs(v - 1.0);
    for (std::size_t i = 0; i < k && ++idx[i] == axes[i].values.size(); ++i) idx[i] = 0;
  }
  return 0.5 * sum.value();
}

}  // namespace

GridQuadrature tv_quadrature_multi(const ProductDensity& model, int q, int n, int panels) {
  if (panels < 2) fail(ErrorKind::Domain, "need at least two panels per axis");
  cell_count(q, n);
  const std::size_t k = model.dimension();
  const double points = std::pow(15.0 * 2.0 * panels, static_cast<double>(k));
  if (points > 2e8) fail(ErrorKind::Budget, "tensor grid too large; reduce the panel count");
  auto run = [&](int p) {
    std::vector<AxisRule> axes;
    for (const auto& f : model.factors()) axes.push_back(axis_rule(*f, q, n, p));
    return tensor_sum(axes);
  };
  GridQuadrature g;
  g.value = run(panels);
  g.error = std::fabs(g.value - run(panels / 2));
  return g;
}

double sup_deviation(const UnitDensity& model, int q, int n, int grid_size) {
  if (grid_size < 1) fail(ErrorKind::Domain, "grid size must be positive");
  cell_count(q, n);
  double m = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    const double x = (i + 0.5) / grid_size;
    m = std::max(m, std::fabs(remainder_density_at(model, q, n, x) - 1.0));
  }
  return m;
}

// ---------------------------------------------------------------------------

std::optional<double> TvReport::bound(const std::string& name) const {
  for (const auto& b : bounds) {
    if (b.name == name) return b.value;
  }
  return std::nullopt;
}

TvReport tv_report(const UnitDensity& model, int q, int n, const TvReportOptions& options) {
  TvReport r;
  r.q = q;
  r.n = n;

  try {
    if (is_monotone(model) || uniform_after(model, q, n)) {
      r.exact = tv_exact_crossing(model, q, n);
      r.method = "crossing";
    } else {
      r.exact = tv_quadrature(model, q, n, options.tolerance);
      r.method = "quadrature";
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Budget && e.kind() != ErrorKind::Shape) throw;
  }

  auto add = [&](const char* name, auto&& compute) {
    try {
      r.bounds.push_back({name, std::min(1.0, compute())});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Unsupported && e.kind() != ErrorKind::Domain && e.kind() != ErrorKind::Budget &&
          e.kind() != ErrorKind::Depth) {
        throw;
      }
    }
  };
  add("gradient_global", [&] { return tv_bound_gradient(model, q, n, false); });
  add("gradient_percell", [&] { return tv_bound_gradient(model, q, n, true); });
  add("refined", [&] { return tv_bound_refined_low_alpha(model, q, n); });
  if (options.proxy) {
    std::optional<MixedBound> mixed;
    add("mixed", [&] {
      mixed = tv_bound_mixed(model, *options.proxy, q, n);
      return mixed->value;
    });
    if (mixed && mixed->per_cell) r.bounds.push_back({"mixed_percell", std::min(1.0, *mixed->per_cell)});
  }
  if (options.ladder) {
    const auto* ladder = options.ladder;
    add("coupling", [&] { return coupling_tv_bound(*ladder, n); });
    try {
      r.wasserstein = wasserstein_bounds(*ladder, n);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Depth) throw;
    }
  }
  try {
    r.second_order = tv_bound_second_order(model, q, n, options.xi_rule);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Unsupported && e.kind() != ErrorKind::Budget) throw;
  }

  if (r.exact) {
    for (const auto& b : r.bounds) r.consistent = r.consistent && *r.exact <= b.value + 1e-9;
  }
  return r;
}

}  // namespace qrem
