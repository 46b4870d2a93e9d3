#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qrem::numerics {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  std::size_t max_intervals = 200000;
  /// When < 1, the integrand is assumed to behave like (t - a)^(exponent - 1)
  /// near the left endpoint and the substitution t = a + (b - a) s^(1/exponent)
  /// is applied before subdividing.
  double left_singularity_exponent = 1.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  std::size_t intervals = 0;
};

/// 15-point Gauss-Legendre rule on [a, b].
double gauss_legendre15(const std::function<double(double)>& f, double a, double b);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre_rule(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Globally adaptive integration: composite GL15 with recursive bisection of
/// the interval carrying the largest error estimate (|GL15(I) - GL15(left) -
/// GL15(right)|). `breakpoints` (strictly inside (a,b)) seed the initial
/// partition. Throws Error(Tolerance) with the achieved estimate attached when
/// the interval budget runs out first.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {},
                           std::span<const double> breakpoints = {});

}  // namespace qrem::numerics
