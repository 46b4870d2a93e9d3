#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "density.hpp"
#include "fixed_point.hpp"
#include "numerics/rng.hpp"
#include "remainder.hpp"

namespace qrem {

/// Default truncation depth: 12 for q = 2, 4 for q = 10, otherwise the
/// largest D with q^D <= 10^4 (at least 1).
int default_depth(int q);

/// One draw of the coupled sampler. `n` is empty when the draw landed in the
/// residual event {N > D}; then k = 0, u = 0 and x comes from the rejection branch.
struct CouplingSample {
  std::optional<int> n;
  std::uint64_t k = 0;
  double u = 0.0;
  double x = 0.0;
};

/// Piece of the conditional-tail envelope: linear on [a, b) from `left` to `right`.
struct EnvelopeSegment {
  double a = 0.0;
  double b = 0.0;
  double left = 0.0;
  double right = 0.0;
};

class TailEnvelope {
 public:
  TailEnvelope(int q, int n, std::vector<EnvelopeSegment> segments);
  int q() const noexcept { return q_; }
  int n() const noexcept { return n_; }
  std::span<const EnvelopeSegment> segments() const noexcept { return segments_; }
  /// Value at x in [0,1).
  double operator()(double x) const;
  double max_value() const;

 private:
  int q_;
  int n_;
  std::vector<EnvelopeSegment> segments_;
};

/// Per-cell infima of f at levels 0..D, their increments c_{k;n} and the law
/// of the stopping depth N. Immutable after build(); sampling is reentrant.
class InfimumLadder {
 public:
  static InfimumLadder build(DensityPtr model, int q, int depth, std::uint64_t budget = kDefaultTermBudget);

  const DensityPtr& model() const noexcept { return model_; }
  int q() const noexcept { return q_; }
  int depth() const noexcept { return depth_; }

  /// inf_{I_{k;n}} f for k = 1..q^n (entry k-1).
  std::span<const double> infima(int n) const;
  /// c_{k;n} for k = 1..q^n (entry k-1); level 0 holds c_empty = inf f.
  std::span<const double> increments(int n) const;

  double prob_n_le(int n) const;
  double prob_n_gt(int n) const { return 1.0 - prob_n_le(n); }
  /// P(N <= n | X = x) = inf_{I_n(x)} f / f(x), the cell located by exact digits.
  double cond_prob_n_le(const FixedPointReal& x, int n) const;
  double cond_prob_n_le(double x, int n) const;

  /// Upper envelope of x -> P(N > n | X = x): on every cell, the chord from the
  /// left-endpoint value to the right-end limit. Needs tail_convex_decreasing().
  TailEnvelope envelope(int n) const;

  /// One draw. Uniform consumption: 3 on the N <= D branch (N, K, U); on the
  /// residual branch 1 for N plus 2 per rejection proposal (inverse-CDF draw,
  /// accept test). Throws Error(Rejection) after 10^6 proposals.
  CouplingSample sample(numerics::Rng& rng) const;

  static constexpr std::uint64_t kRejectionBudget = 1000000;

 private:
  InfimumLadder() = default;
  std::uint64_t cell_of(const FixedPointReal& x, int n) const;
  void check_level(int n) const;

  DensityPtr model_;
  int q_ = 2;
  int depth_ = 0;
  std::vector<std::vector<double>> infima_;
  std::vector<std::vector<double>> increments_;
  std::vector<std::vector<double>> weight_prefix_;  // running sums of increments per level
  std::vector<double> cumulative_;
};

}  // namespace qrem
