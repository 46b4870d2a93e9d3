#include "numerics/roots.hpp"

#include <cmath>
#include <vector>

#include "errors.hpp"

namespace qrem::numerics {

namespace {
bool opposite(double a, double b) { return (a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0); }
}  // namespace

RootResult newton_bisect(const std::function<double(double)>& f,
                         const std::function<double(double)>& df, double lo, double hi,
                         double start, const RootOptions& options) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, 0.0, 0, 0};
  if (fhi == 0.0) return {hi, 0.0, 0, 0};
  if (!opposite(flo, fhi)) fail(ErrorKind::Shape, "newton_bisect: no sign change on bracket");

  RootResult r;
  double x = (start > lo && start < hi) ? start : 0.5 * (lo + hi);
  double fx = f(x);
  double prev_step = hi - lo;
  double step = prev_step;

  for (int it = 1; it <= options.max_iterations; ++it) {
    r.iterations = it;
    if (fx == 0.0 || std::fabs(fx) <= options.f_abs_tol) break;
    // tighten bracket around x
    if (opposite(flo, fx)) {
      hi = x;
      fhi = fx;
    } else {
      lo = x;
      flo = fx;
    }
    const double d = df(x);
    double next = (d != 0.0 && std::isfinite(d)) ? x - fx / d : lo - 1.0;
    const bool outside = !(next > lo && next < hi);
    const bool slow = std::fabs(2.0 * (next - x)) > std::fabs(prev_step);
    prev_step = step;
    if (outside || slow) {
      next = 0.5 * (lo + hi);
      ++r.bisection_steps;
    }
    step = next - x;
    x = next;
    fx = f(x);
    if (std::fabs(step) <= options.x_rel_tol * std::max(1.0, std::fabs(x)) ||
        (hi - lo) <= options.x_rel_tol * std::max(1.0, std::fabs(x))) {
      break;
    }
    if (it == options.max_iterations) fail(ErrorKind::Convergence, "newton_bisect: iteration cap reached");
  }
  r.x = x;
  r.fx = fx;
  return r;
}

RootResult bisect(const std::function<double(double)>& f, double lo, double hi, double x_abs_tol,
                  int max_iterations) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return {lo, 0.0, 0, 0};
  if (fhi == 0.0) return {hi, 0.0, 0, 0};
  if (!opposite(flo, fhi)) fail(ErrorKind::Shape, "bisect: no sign change on bracket");
  RootResult r;
  for (int it = 1; it <= max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    r.iterations = it;
    r.bisection_steps = it;
    if (fm == 0.0) return {mid, 0.0, it, it};
    if (opposite(flo, fm)) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
    if (hi - lo <= x_abs_tol || !(mid > lo || mid < hi)) break;
  }
  r.x = 0.5 * (lo + hi);
  r.fx = f(r.x);
  return r;
}

std::optional<std::pair<double, double>> scan_for_sign_change(
    const std::function<double(double)>& f, double a, double b, int points) {
  std::vector<double> xs;
  xs.reserve(points + 2);
  xs.push_back(a);
  for (int i = 0; i < points; ++i) xs.push_back(a + (b - a) * (i + 0.5) / points);
  xs.push_back(b);
  double prev = f(xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double cur = f(xs[i]);
    if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) return std::pair{xs[i - 1], xs[i]};
    prev = cur;
  }
  return std::nullopt;
}

}  // namespace qrem::numerics
