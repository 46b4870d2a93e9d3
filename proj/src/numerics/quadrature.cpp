#include "numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "errors.hpp"
#include "numerics/summation.hpp"

namespace qrem::numerics {

void gauss_legendre_rule(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / dp;
      if (std::fabs(z - z1) < 1e-16) break;
    }
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

namespace {

struct Rule15 {
  std::vector<double> x, w;
  Rule15() { gauss_legendre_rule(15, x, w); }
};

const Rule15& rule15() {
  static const Rule15 rule;
  return rule;
}

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& other) const { return error < other.error; }
};

Piece evaluate_piece(const std::function<double(double)>& f, double a, double b) {
  const double m = 0.5 * (a + b);
  const double whole = gauss_legendre15(f, a, b);
  const double halves = gauss_legendre15(f, a, m) + gauss_legendre15(f, m, b);
  return {a, b, halves, std::fabs(halves - whole)};
}

}  // namespace

double gauss_legendre15(const std::function<double(double)>& f, double a, double b) {
  const auto& r = rule15();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(c + h * r.x[i]);
  return s * h;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options, std::span<const double> breakpoints) {
  if (!(b > a)) return {};

  std::function<double(double)> g = f;
  double lo = a, hi = b;
  std::vector<double> cuts;
  const double beta = options.left_singularity_exponent;
  if (beta < 1.0) {
    if (!(beta > 0.0)) fail(ErrorKind::InvalidArgument, "singularity exponent must be positive");
    const double width = b - a;
    const double inv = 1.0 / beta;
    g = [&f, a, width, inv](double s) {
      if (s <= 0.0) return 0.0;
      const double t = a + width * std::pow(s, inv);
      return f(t) * width * inv * std::pow(s, inv - 1.0);
    };
    lo = 0.0;
    hi = 1.0;
    for (double p : breakpoints) cuts.push_back(std::pow((p - a) / width, beta));
  } else {
    cuts.assign(breakpoints.begin(), breakpoints.end());
  }
  std::sort(cuts.begin(), cuts.end());

  std::priority_queue<Piece> heap;
  std::vector<Piece> settled;  // pieces too narrow to split further
  double left = lo;
  for (double c : cuts) {
    if (c > left && c < hi) {
      heap.push(evaluate_piece(g, left, c));
      left = c;
    }
  }
  heap.push(evaluate_piece(g, left, hi));

  auto total_error = [&]() {
    double e = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      e += copy.top().error;
      copy.pop();
    }
    for (const auto& p : settled) e += p.error;
    return e;
  };

  double err = total_error();
  std::size_t count = heap.size();
  while (err > options.abs_tol && !heap.empty()) {
    if (count >= options.max_intervals) break;
    Piece worst = heap.top();
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b) || (worst.b - worst.a) < 1e-15 * std::max(1.0, std::fabs(m))) {
      settled.push_back(worst);
      continue;
    }
    Piece l = evaluate_piece(g, worst.a, m);
    Piece r = evaluate_piece(g, m, worst.b);
    err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++count;
    // refresh the running error occasionally to shed accumulated rounding
    if (count % 256 == 0) err = total_error();
  }

  CompensatedSum sum;
  double final_err = 0.0;
  std::size_t pieces = settled.size() + heap.size();
  for (const auto& p : settled) {
    sum += p.value;
    final_err += p.error;
  }
  while (!heap.empty()) {
    sum += heap.top().value;
    final_err += heap.top().error;
    heap.pop();
  }
  QuadratureResult result{sum.value(), final_err, pieces};
  if (final_err > options.abs_tol) {
    std::ostringstream msg;
    msg << "quadrature tolerance " << options.abs_tol << " not met (error estimate " << final_err
        << ", value " << result.value << ")";
    throw Error(ErrorKind::Tolerance, msg.str(), result.value);
  }
  return result;
}

}  // namespace qrem::numerics
