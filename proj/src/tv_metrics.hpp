#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coupling.hpp"
#include "density.hpp"
#include "remainder.hpp"

namespace qrem {

/// Evaluation points xi_{n,j} for the second-order term. CellSup uses
/// sup_{I_j} |f'| instead of f'(xi).
enum class XiRule { Left, Midpoint, Right, CellSup };

const char* to_string(XiRule r);
XiRule parse_xi_rule(const std::string& text);

struct CrossingResult {
  double tv = 0.0;
  double x0 = 0.0;  // f_n(x0) = 1; NaN when f_n == 1
  int iterations = 0;
  int bisection_steps = 0;
};

/// d_TV(P_n, mu) = |F_n(x0) - x0| where f_n(x0) = 1. Newton from 0.5 with a
/// bisection fallback inside the bracket found by a 64-point scan.
/// Throws Error(Shape) for non-monotone models.
CrossingResult tv_crossing(const UnitDensity& model, int q, int n);
double tv_exact_crossing(const UnitDensity& model, int q, int n);

/// (1/2) int_0^1 |f_n - 1| by adaptive Gauss-Legendre. Throws Error(Tolerance)
/// carrying the achieved estimate when `tol` is not met.
double tv_quadrature(const UnitDensity& model, int q, int n, double tol = 1e-10);

/// (1/6) q^-2n sum_j sup_{I_j} |f'| (per_cell) or (1/6) q^-n ||f'||_inf.
double tv_bound_gradient(const UnitDensity& model, int q, int n, bool per_cell);

struct MixedBound {
  double value = 0.0;                 // (1/2)||f-g||_1 + (1/6) q^-n ||g'||_inf
  double l1_distance = 0.0;           // ||f-g||_1
  std::optional<double> per_cell;     // with the per-cell gradient term
};

/// Bound through a smooth proxy g.
MixedBound tv_bound_mixed(const UnitDensity& f, const UnitDensity& g, int q, int n, double tol = 1e-9);

struct SecondOrderEstimate {
  double leading = 0.0;        // (1/8) q^-2n |sum_j f'(xi_j)|
  double riemann_limit = 0.0;  // (1/8) q^-n |f(1) - f(0)|
  XiRule rule = XiRule::Midpoint;
  std::string caveat;
};

/// Leading term of the second-order expansion of d_TV; not a rigorous bound.
SecondOrderEstimate tv_bound_second_order(const UnitDensity& model, int q, int n, XiRule rule = XiRule::Midpoint);

/// q^-n ((1/2) f(q^-n) + (1/6) ||f'||_1) for the power model with 1 < alpha < 2.
double tv_bound_refined_low_alpha(const UnitDensity& model, int q, int n);

/// P(N > n).
double coupling_tv_bound(const InfimumLadder& ladder, int n);

struct WassersteinBounds {
  double w_tv = 0.0;       // P(N > n)
  double w_quarter = 0.0;  // P(N > n) / 4
};
WassersteinBounds wasserstein_bounds(const InfimumLadder& ladder, int n);

struct MultivariateBound {
  double global = 0.0;             // (1/2) sqrt(k/3) q^-n ||grad f||_inf
  std::optional<double> per_cell;  // (1/2) sqrt(k/3) q^-n(k+1) sum_j ||grad f_{n,j}||_inf
};
MultivariateBound tv_bound_multivariate(const ProductDensity& model, int q, int n);

struct GridQuadrature {
  double value = 0.0;
  double error = 0.0;  // |value - value at half the panels|
};

/// (1/2) int_{(0,1)^k} |f_n - 1| on a tensor grid of composite 15-point
/// Gauss-Legendre panels. Each axis is split at its factor's own crossing
/// (monotone factors) and uses the power substitution for singular factors.
GridQuadrature tv_quadrature_multi(const ProductDensity& model, int q, int n, int panels = 64);

/// max over the grid (i + 1/2)/grid_size of |f_n - 1|.
double sup_deviation(const UnitDensity& model, int q, int n, int grid_size = 1000);

struct NamedValue {
  std::string name;
  double value = 0.0;
};

struct TvReport {
  int q = 2;
  int n = 0;
  std::optional<double> exact;
  std::string method;  // "crossing" or "quadrature"
  /// Rigorous upper bounds on d_TV, capped at 1.
  std::vector<NamedValue> bounds;
  std::optional<SecondOrderEstimate> second_order;
  std::optional<WassersteinBounds> wasserstein;
  /// exact <= every bound + 1e-9 (true when exact is absent).
  bool consistent = true;

  std::optional<double> bound(const std::string& name) const;
};

struct TvReportOptions {
  const InfimumLadder* ladder = nullptr;
  XiRule xi_rule = XiRule::Midpoint;
  double tolerance = 1e-10;
  DensityPtr proxy;  // smooth g for the mixed bound
};

/// Exact value plus every applicable bound; inapplicable bounds are omitted.
/// The exact value is dropped when q^n is over budget; a quadrature that
/// misses options.tolerance throws Error(Tolerance).
TvReport tv_report(const UnitDensity& model, int q, int n, const TvReportOptions& options = {});

}  // namespace qrem
