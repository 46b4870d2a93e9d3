#pragma once

#include <functional>
#include <optional>
#include <utility>

namespace qrem::numerics {

struct RootOptions {
  double x_rel_tol = 1e-14;
  double f_abs_tol = 0.0;  // accept as soon as |f| <= f_abs_tol
  int max_iterations = 200;
};

struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  int bisection_steps = 0;
};

/// Newton-Raphson safeguarded by a sign-change bracket [lo, hi]. A Newton step
/// that leaves the bracket, or fails to halve |f| relative to two steps ago, is
/// replaced by a bisection step. Requires f(lo) and f(hi) of opposite sign (or
/// one of them zero). Throws Error(Convergence) after max_iterations.
RootResult newton_bisect(const std::function<double(double)>& f,
                         const std::function<double(double)>& df, double lo, double hi,
                         double start, const RootOptions& options = {});

/// Plain bisection to |hi - lo| <= x_abs_tol.
RootResult bisect(const std::function<double(double)>& f, double lo, double hi, double x_abs_tol,
                  int max_iterations = 2000);

/// Scans `points` equally spaced midpoints (i + 1/2)/points of [a, b], plus
/// the two endpoints, for the first sign change of f.
std::optional<std::pair<double, double>> scan_for_sign_change(
    const std::function<double(double)>& f, double a, double b, int points);

}  // namespace qrem::numerics
