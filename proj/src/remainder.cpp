#include "remainder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "errors.hpp"
#include "numerics/summation.hpp"

namespace qrem {

namespace {

constexpr std::uint64_t kMarginalTermBudget = std::uint64_t{1} << 26;

void check_law_args(int q, int n) {
  if (q < 2) fail(ErrorKind::Domain, "base q must be at least 2");
  if (n < 0) fail(ErrorKind::Domain, "depth n must be nonnegative");
}

}  // namespace

std::uint64_t cell_count(int q, int n, std::uint64_t budget) {
  check_law_args(q, n);
  std::uint64_t p = 1;
  for (int i = 0; i < n; ++i) {
    if (p > budget / static_cast<std::uint64_t>(q)) {
      fail(ErrorKind::Budget, "q^n = " + std::to_string(q) + "^" + std::to_string(n) + " exceeds the budget of " +
                                  std::to_string(budget) + " terms; use the coupling bound instead");
    }
    p *= static_cast<std::uint64_t>(q);
  }
  return p;
}

RemainderLaw::RemainderLaw(DensityPtr m, int q_, int n_) : model(std::move(m)), q(q_), n(n_) {
  if (!model) fail(ErrorKind::InvalidArgument, "remainder law needs a model");
  check_law_args(q, n);
}

double remainder_density_at(const UnitDensity& f, int q, int n, double x, std::uint64_t budget) {
  const std::uint64_t cells = cell_count(q, n, budget);
  if (cells == 1) return f.density_at(x);
  const double scale = static_cast<double>(cells);
  numerics::CompensatedSum sum;
  for (std::uint64_t j = 0; j < cells; ++j) sum += f.density_at((static_cast<double>(j) + x) / scale);
  return sum.value() / scale;
}

double remainder_cumulative_at(const UnitDensity& f, int q, int n, double x, std::uint64_t budget) {
  const std::uint64_t cells = cell_count(q, n, budget);
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (cells == 1) return f.cumulative_at(x);
  const double scale = static_cast<double>(cells);
  numerics::CompensatedSum sum;
  for (std::uint64_t j = 0; j < cells; ++j) {
    sum += f.mass_width(static_cast<double>(j) / scale, x / scale);
  }
  return sum.value();
}

double remainder_cdf(const RemainderLaw& law, double x, std::uint64_t budget) {
  if (!(x >= 0.0 && x <= 1.0)) fail(ErrorKind::Domain, "remainder cdf argument must lie in [0,1]");
  return remainder_cumulative_at(*law.model, law.q, law.n, x, budget);
}

double remainder_pdf(const RemainderLaw& law, double x, std::uint64_t budget) {
  if (!(x > 0.0 && x < 1.0)) fail(ErrorKind::Domain, "remainder pdf argument must lie in (0,1)");
  return remainder_density_at(*law.model, law.q, law.n, x, budget);
}

double remainder_pdf_derivative(const RemainderLaw& law, double x, std::uint64_t budget) {
  if (!(x > 0.0 && x < 1.0)) fail(ErrorKind::Domain, "remainder pdf argument must lie in (0,1)");
  const std::uint64_t cells = cell_count(law.q, law.n, budget);
  const double scale = static_cast<double>(cells);
  numerics::CompensatedSum sum;
  for (std::uint64_t j = 0; j < cells; ++j) sum += law.model->derivative_at((static_cast<double>(j) + x) / scale);
  return sum.value() / (scale * scale);
}

double remainder_pdf_multi(const ProductDensity& model, int q, int n, std::span<const double> x,
                           std::uint64_t budget) {
  if (x.size() != model.dimension()) fail(ErrorKind::InvalidArgument, "point dimension does not match the model");
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && x[i] < 1.0)) fail(ErrorKind::Domain, "every coordinate must lie in (0,1)");
    v *= remainder_density_at(*model.factors()[i], q, n, x[i], budget);
  }
  return v;
}

namespace {

void check_marginal_args(int q, int n) {
  if (q < 2) fail(ErrorKind::Domain, "base q must be at least 2");
  if (n < 1) fail(ErrorKind::Domain, "digit index n must be at least 1");
  cell_count(q, n - 1, kMarginalTermBudget / static_cast<std::uint64_t>(q - 1));
}

}  // namespace

double benford_digit_marginal(int q, int n, int d) {
  check_marginal_args(q, n);
  if (d < 0 || d >= q) fail(ErrorKind::Domain, "digit out of range");
  const std::uint64_t inner = cell_count(q, n - 1, kMarginalTermBudget);
  const double qn = std::pow(static_cast<double>(q), n);
  numerics::CompensatedSum sum;
  for (int j = 1; j < q; ++j) {
    for (std::uint64_t i = 0; i < inner; ++i) {
      const double m = j * qn + static_cast<double>(i) * q + d;
      sum += std::log1p(1.0 / m);
    }
  }
  return sum.value() / std::log(static_cast<double>(q));
}

double benford_digit_gap(int q, int n) {
  check_marginal_args(q, n);
  const std::uint64_t inner = cell_count(q, n - 1, kMarginalTermBudget);
  const double qn = std::pow(static_cast<double>(q), n);
  numerics::CompensatedSum sum;
  for (int j = 1; j < q; ++j) {
    for (std::uint64_t i = 0; i < inner; ++i) {
      const double m = j * qn + static_cast<double>(i) * q;
      sum += std::log1p((q - 1.0) / (m * (m + q)));
    }
  }
  return sum.value() / std::log(static_cast<double>(q));
}

// ---------------------------------------------------------------------------

RemainderDensity::RemainderDensity(DensityPtr base, int q, int n) : base_(std::move(base)), q_(q), n_(n) {
  if (!base_) fail(ErrorKind::InvalidArgument, "remainder density needs a base model");
  cell_count(q, n);
}

double RemainderDensity::density_at(double x) const { return remainder_density_at(*base_, q_, n_, x); }

double RemainderDensity::cumulative_at(double x) const { return remainder_cumulative_at(*base_, q_, n_, x); }

double RemainderDensity::derivative_at(double x) const {
  const double scale = static_cast<double>(cell_count(q_, n_));
  numerics::CompensatedSum sum;
  for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(scale); ++j) {
    sum += base_->derivative_at((static_cast<double>(j) + x) / scale);
  }
  return sum.value() / (scale * scale);
}

std::string RemainderDensity::spec() const {
  return "remainder(q=" + std::to_string(q_) + ",n=" + std::to_string(n_) + "):" + base_->spec();
}

Monotonicity RemainderDensity::monotonicity() const {
  const auto m = base_->monotonicity();
  if (m == Monotonicity::PiecewiseConstant) return breakpoint_level() ? m : Monotonicity::General;
  return m;
}

std::optional<double> RemainderDensity::deriv_sup() const {
  if (auto s = base_->deriv_sup()) return *s / static_cast<double>(cell_count(q_, n_));
  return std::nullopt;
}

std::optional<double> RemainderDensity::pdf_sup() const { return base_->pdf_sup(); }

std::optional<int> RemainderDensity::breakpoint_level() const {
  const auto lvl = base_->breakpoint_level();
  if (!lvl || base_->breakpoint_base() != q_) return std::nullopt;
  return std::max(0, *lvl - n_);
}

double RemainderDensity::infimum_on(double a, double b) const {
  if (auto lvl = breakpoint_level()) {
    // f_n is constant on level-lvl cells: take the minimum over cell midpoints.
    const double cells = std::pow(static_cast<double>(q_), *lvl);
    const auto lo = static_cast<std::uint64_t>(std::clamp(std::floor(a * cells), 0.0, cells - 1));
    const auto hi = static_cast<std::uint64_t>(std::clamp(std::ceil(b * cells) - 1.0, 0.0, cells - 1));
    double m = std::numeric_limits<double>::infinity();
    for (std::uint64_t c = lo; c <= std::max(lo, hi); ++c) m = std::min(m, density_at((c + 0.5) / cells));
    return m;
  }
  return UnitDensity::infimum_on(a, b);
}

}  // namespace qrem
