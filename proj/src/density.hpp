#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qrem {

enum class Monotonicity { Increasing, Decreasing, PiecewiseConstant, General };

const char* to_string(Monotonicity m);

/// A probability density on [0,1) together with the smoothness metadata the
/// convergence bounds consume. Implementations are immutable after
/// construction.
///
/// pdf()/cdf() check their domain; the *_at() hooks do not and may be called
/// at the closed endpoints, where they return the one-sided limit of the
/// continuous representative (possibly +inf for integrable singularities).
class UnitDensity {
 public:
  static constexpr double kSingularSentinel = 1e300;

  virtual ~UnitDensity() = default;

  /// f(x) for x in [0,1). Singular densities return kSingularSentinel at x = 0.
  double pdf(double x) const;
  /// F(x) for x in [0,1].
  double cdf(double x) const;
  /// F(b) - F(a) for 0 <= a <= b <= 1, evaluated without cancellation where possible.
  virtual double mass(double a, double b) const { return cumulative_at(b) - cumulative_at(a); }
  /// F(a + h) - F(a), for callers that know the width h more accurately than a + h.
  virtual double mass_width(double a, double h) const { return mass(a, a + h); }

  virtual double density_at(double x) const = 0;
  virtual double cumulative_at(double x) const = 0;
  /// f'(x); throws Error(Unsupported) for models without a derivative.
  virtual double derivative_at(double x) const;

  /// Inverse CDF. Default: safeguarded Newton on cdf to 1e-14.
  virtual double quantile(double u) const;

  /// Canonical spec string, e.g. "power:alpha=0.5".
  virtual std::string spec() const = 0;
  virtual Monotonicity monotonicity() const = 0;

  /// ||f'||_inf, when finite.
  virtual std::optional<double> deriv_sup() const { return std::nullopt; }
  /// ||f''||_inf, when finite.
  virtual std::optional<double> deriv2_sup() const { return std::nullopt; }
  /// ||f'||_1 for monotone f with an improperly integrable derivative.
  virtual std::optional<double> deriv_l1() const { return std::nullopt; }
  /// ||f||_inf, when finite.
  virtual std::optional<double> pdf_sup() const { return std::nullopt; }

  /// beta with f(t) ~ t^(beta - 1) as t -> 0+; 1 for densities bounded near 0.
  virtual double singularity_exponent() const { return 1.0; }
  /// Level m at which the density is piecewise constant on base-q cells (jumps only there).
  virtual std::optional<int> breakpoint_level() const { return std::nullopt; }
  virtual int breakpoint_base() const { return 2; }
  /// Whether x -> P(N > n | X = x) is convex decreasing on every cell, so the
  /// left-endpoint chord is an upper envelope. Models opt in explicitly.
  virtual bool tail_convex_decreasing() const { return false; }

  /// inf of f over [a, b). Exact by endpoint evaluation for monotone models;
  /// general models need deriv_sup for a certified grid lower bound.
  virtual double infimum_on(double a, double b) const;
  /// sup of |f'| over the open interval (a, b); may be +inf.
  virtual double abs_deriv_sup_on(double a, double b) const;
  /// sup of f over (a, b); may be +inf.
  virtual double pdf_sup_on(double a, double b) const;

  /// inf of f over the cell I_{k;n} = [(k-1) q^-n, k q^-n), 1 <= k <= q^n.
  double interval_infimum(std::uint64_t k, int n, int q) const;

 protected:
  /// Hook behind interval_infimum (arguments already validated). Models with
  /// cell-aligned structure override it to stay exact.
  virtual double cell_infimum(std::uint64_t k, int n, int q) const;
};

using DensityPtr = std::shared_ptr<const UnitDensity>;

/// Significand density of the extended Newcomb-Benford law in base q:
/// f(x) = (1/ln q) sum_{j=1}^{q-1} 1/(j+x).
class BenfordDensity final : public UnitDensity {
 public:
  explicit BenfordDensity(int q);
  int base() const noexcept { return q_; }

  double density_at(double x) const override;
  double cumulative_at(double x) const override;
  double mass(double a, double b) const override;
  double mass_width(double a, double h) const override;
  double derivative_at(double x) const override;
  double quantile(double u) const override;
  std::string spec() const override;
  Monotonicity monotonicity() const override { return Monotonicity::Decreasing; }
  std::optional<double> deriv_sup() const override;
  std::optional<double> deriv2_sup() const override;
  std::optional<double> deriv_l1() const override;
  std::optional<double> pdf_sup() const override;
  bool tail_convex_decreasing() const override { return true; }
  double abs_deriv_sup_on(double a, double b) const override;

 private:
  int q_;
  double inv_log_q_;
};

/// Beta(alpha, 1): f(t) = alpha t^(alpha-1).
class PowerDensity final : public UnitDensity {
 public:
  explicit PowerDensity(double alpha);
  double alpha() const noexcept { return alpha_; }

  double density_at(double x) const override;
  double cumulative_at(double x) const override;
  double mass(double a, double b) const override;
  double mass_width(double a, double h) const override;
  double derivative_at(double x) const override;
  double quantile(double u) const override;
  std::string spec() const override;
  Monotonicity monotonicity() const override;
  /// Finite iff alpha == 1 or alpha >= 2 (then alpha |alpha - 1|).
  std::optional<double> deriv_sup() const override;
  std::optional<double> deriv2_sup() const override;
  std::optional<double> deriv_l1() const override;
  std::optional<double> pdf_sup() const override;
  double singularity_exponent() const override { return alpha_ < 1.0 ? alpha_ : 1.0; }
  /// Opted in for alpha < 1, where 1/f is concave.
  bool tail_convex_decreasing() const override { return alpha_ <= 1.0; }
  double abs_deriv_sup_on(double a, double b) const override;

 private:
  double alpha_;
};

/// Density constant on each base-q cell of level m (the weights, in cell order).
/// Level 0 with weight 1 is the uniform density as the indicator of [0,1).
class PiecewiseConstantDensity final : public UnitDensity {
 public:
  PiecewiseConstantDensity(int q, int m, std::vector<double> weights);
  static std::shared_ptr<const PiecewiseConstantDensity> uniform();

  int base() const noexcept { return q_; }
  int level() const noexcept { return m_; }
  std::span<const double> weights() const noexcept { return weights_; }
  bool is_uniform() const noexcept;

  double density_at(double x) const override;
  double cumulative_at(double x) const override;
  double mass_width(double a, double h) const override;
  double derivative_at(double x) const override { (void)x; return 0.0; }
  double quantile(double u) const override;
  std::string spec() const override;
  Monotonicity monotonicity() const override { return Monotonicity::PiecewiseConstant; }
  std::optional<double> deriv_sup() const override;
  std::optional<double> deriv2_sup() const override { return deriv_sup(); }
  std::optional<double> pdf_sup() const override;
  std::optional<int> breakpoint_level() const override { return m_; }
  int breakpoint_base() const override { return q_; }
  bool tail_convex_decreasing() const override { return is_uniform(); }
  double infimum_on(double a, double b) const override;
  double abs_deriv_sup_on(double a, double b) const override;
  double pdf_sup_on(double a, double b) const override;

 protected:
  double cell_infimum(std::uint64_t k, int n, int q) const override;

 private:
  std::size_t cell_of(double x) const;
  int q_;
  int m_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;  // F at the level-m cell boundaries
};

/// The uniform law written with the version f = 1 on [0,1) minus {x0}: every
/// cell containing x0 has infimum 0, so P(N <= n) = 1 - q^-n.
class PuncturedUniformDensity final : public UnitDensity {
 public:
  explicit PuncturedUniformDensity(double x0);
  double density_at(double x) const override { return x == x0_ ? 0.0 : 1.0; }
  double cumulative_at(double x) const override { return x; }
  double mass_width(double, double h) const override { return h; }
  double derivative_at(double x) const override { (void)x; return 0.0; }
  double quantile(double u) const override { return u; }
  std::string spec() const override;
  Monotonicity monotonicity() const override { return Monotonicity::General; }
  std::optional<double> pdf_sup() const override { return 1.0; }
  double infimum_on(double a, double b) const override;
  double abs_deriv_sup_on(double, double) const override { return 0.0; }
  double pdf_sup_on(double, double) const override { return 1.0; }

 protected:
  double cell_infimum(std::uint64_t k, int n, int q) const override;

 private:
  double x0_;
};

/// g(x) = f(max(x, eps)) / Z: a bounded-derivative proxy for a density with an
/// endpoint singularity at 0, for the mixed bound.
class ClippedDensity final : public UnitDensity {
 public:
  ClippedDensity(DensityPtr base, double eps);
  double eps() const noexcept { return eps_; }
  const DensityPtr& base() const noexcept { return base_; }

  double density_at(double x) const override;
  double cumulative_at(double x) const override;
  double derivative_at(double x) const override;
  std::string spec() const override;
  Monotonicity monotonicity() const override { return base_->monotonicity(); }
  std::optional<double> deriv_sup() const override;
  std::optional<double> pdf_sup() const override;
  double abs_deriv_sup_on(double a, double b) const override;

 private:
  DensityPtr base_;
  double eps_;
  double norm_;
};

/// Density given by callables. Used for models outside the built-in families.
class FunctionDensity final : public UnitDensity {
 public:
  struct Parts {
    std::function<double(double)> pdf;
    std::function<double(double)> cdf;
    std::function<double(double)> derivative;  // optional
    Monotonicity monotonicity = Monotonicity::General;
    std::optional<double> deriv_sup;
    std::string name = "function";
  };
  explicit FunctionDensity(Parts parts);

  double density_at(double x) const override { return parts_.pdf(x); }
  double cumulative_at(double x) const override { return parts_.cdf(x); }
  double derivative_at(double x) const override;
  std::string spec() const override { return parts_.name; }
  Monotonicity monotonicity() const override { return parts_.monotonicity; }
  std::optional<double> deriv_sup() const override { return parts_.deriv_sup; }

 private:
  Parts parts_;
};

/// Product density g(x_1..x_k) = prod g_i(x_i) on the unit cube.
class ProductDensity {
 public:
  explicit ProductDensity(std::vector<DensityPtr> factors);

  std::size_t dimension() const noexcept { return factors_.size(); }
  const std::vector<DensityPtr>& factors() const noexcept { return factors_; }
  std::string spec() const;

  double pdf(std::span<const double> x) const;
  /// Upper bound on ||grad g||_inf from factor metadata:
  /// sqrt(sum_i (||g_i'|| prod_{l != i} ||g_l||)^2). Empty when any factor
  /// lacks deriv_sup or pdf_sup.
  std::optional<double> gradient_sup() const;

 private:
  std::vector<DensityPtr> factors_;
};

/// Parsed model spec: either a density on [0,1) or a product on the cube.
struct Model {
  DensityPtr density;
  std::shared_ptr<const ProductDensity> product;

  std::size_t dimension() const noexcept { return product ? product->dimension() : 1; }
  std::string spec() const { return product ? product->spec() : density->spec(); }
};

/// Parses `uniform`, `benford:q=10`, `power:alpha=0.5`,
/// `pwc:q=2,m=2,w=0.4;0.4;1.6;1.6`, `punctured:x0=0.25`,
/// `clip:eps=0.01:<spec>` and `product:<spec>|<spec>|...`.
/// Throws Error(Parse) on malformed input.
Model parse_model(const std::string& spec);
DensityPtr parse_density(const std::string& spec);

}  // namespace qrem
