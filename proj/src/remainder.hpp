#pragma once

#include <cstdint>
#include <span>

#include "density.hpp"

namespace qrem {

/// Maximum number of terms per f_n / F_n query (cells q^n).
inline constexpr std::uint64_t kDefaultTermBudget = std::uint64_t{1} << 24;

/// q^n, throwing Error(Budget) above `budget`.
std::uint64_t cell_count(int q, int n, std::uint64_t budget = kDefaultTermBudget);

/// Law P_n of the scaled remainder T^n(X) for X with density `model`.
struct RemainderLaw {
  RemainderLaw(DensityPtr model, int q, int n);

  DensityPtr model;
  int q;
  int n;
};

/// F_n(x) = sum_j F(q^-n (j + x)) - F(q^-n j), x in [0,1].
double remainder_cdf(const RemainderLaw& law, double x, std::uint64_t budget = kDefaultTermBudget);

/// f_n(x) = q^-n sum_j f(q^-n (j + x)), x in (0,1). Compensated summation in
/// cell order.
double remainder_pdf(const RemainderLaw& law, double x, std::uint64_t budget = kDefaultTermBudget);

/// f_n'(x) = q^-2n sum_j f'(q^-n (j + x)).
double remainder_pdf_derivative(const RemainderLaw& law, double x, std::uint64_t budget = kDefaultTermBudget);

/// Unchecked variants used by the quadrature and root-finding paths; x may be
/// an endpoint.
double remainder_density_at(const UnitDensity& f, int q, int n, double x, std::uint64_t budget = kDefaultTermBudget);
double remainder_cumulative_at(const UnitDensity& f, int q, int n, double x,
                               std::uint64_t budget = kDefaultTermBudget);

/// k-dimensional f_n for a product density, evaluated as the product of the
/// factor-wise univariate f_n (the q^(nk)-term sum factorizes).
double remainder_pdf_multi(const ProductDensity& model, int q, int n, std::span<const double> x,
                           std::uint64_t budget = kDefaultTermBudget);

/// P(X_n = d) under the extended Newcomb-Benford law in base q:
/// log_q prod_{j=1}^{q-1} prod_{i=1}^{q^(n-1)} (1 + 1/(j q^n + (i-1) q + d)).
double benford_digit_marginal(int q, int n, int d);

/// P(X_n = 0) - P(X_n = q-1), summed termwise as log1p((q-1)/(m(m+q))) so the
/// difference does not cancel.
double benford_digit_gap(int q, int n);

/// f_n packaged as a density on [0,1) (the law of T^n(X)).
class RemainderDensity final : public UnitDensity {
 public:
  RemainderDensity(DensityPtr base, int q, int n);

  double density_at(double x) const override;
  double cumulative_at(double x) const override;
  double derivative_at(double x) const override;
  std::string spec() const override;
  Monotonicity monotonicity() const override;
  std::optional<double> deriv_sup() const override;
  std::optional<double> pdf_sup() const override;
  double singularity_exponent() const override { return base_->singularity_exponent(); }
  std::optional<int> breakpoint_level() const override;
  int breakpoint_base() const override { return q_; }
  double infimum_on(double a, double b) const override;

 private:
  DensityPtr base_;
  int q_;
  int n_;
};

}  // namespace qrem
