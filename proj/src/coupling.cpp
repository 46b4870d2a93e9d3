#include "coupling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"
#include "numerics/summation.hpp"

namespace qrem {

int default_depth(int q) {
  if (q == 2) return 12;
  if (q == 10) return 4;
  if (q < 2) fail(ErrorKind::Domain, "base q must be at least 2");
  return std::max(1, static_cast<int>(std::floor(std::log(1e4) / std::log(static_cast<double>(q)) + 1e-12)));
}

// ---------------------------------------------------------------------------

TailEnvelope::TailEnvelope(int q, int n, std::vector<EnvelopeSegment> segments)
    : q_(q), n_(n), segments_(std::move(segments)) {}

double TailEnvelope::operator()(double x) const {
  if (!(x >= 0.0 && x < 1.0)) fail(ErrorKind::Domain, "envelope argument must lie in [0,1)");
  auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                             [](double v, const EnvelopeSegment& s) { return v < s.a; });
  const auto& s = *std::prev(it);
  const double t = (x - s.a) / (s.b - s.a);
  return s.left + (s.right - s.left) * t;
}

double TailEnvelope::max_value() const {
  double m = 0.0;
  for (const auto& s : segments_) m = std::max({m, s.left, s.right});
  return m;
}

// ---------------------------------------------------------------------------

InfimumLadder InfimumLadder::build(DensityPtr model, int q, int depth, std::uint64_t budget) {
  if (!model) fail(ErrorKind::InvalidArgument, "ladder needs a model");
  if (depth < 0) fail(ErrorKind::Domain, "ladder depth must be nonnegative");
  cell_count(q, depth, budget);

  InfimumLadder L;
  L.model_ = std::move(model);
  L.q_ = q;
  L.depth_ = depth;
  const auto uq = static_cast<std::uint64_t>(q);

  std::uint64_t cells = 1;
  for (int n = 0; n <= depth; ++n, cells *= uq) {
    std::vector<double> inf(cells), inc(cells), prefix(cells);
    numerics::CompensatedSum level_sum, running;
    for (std::uint64_t k = 0; k < cells; ++k) {
      double v = L.model_->interval_infimum(k + 1, n, q);
      const double parent = n == 0 ? 0.0 : L.infima_[n - 1][k / uq];
      // Certified grid bounds need not be nested; infima over nested cells are.
      v = std::max(v, parent);
      inf[k] = v;
      inc[k] = v - parent;
      running += inc[k];
      prefix[k] = running.value();
      level_sum += v;
    }
    L.cumulative_.push_back(std::min(1.0, level_sum.value() / static_cast<double>(cells)));
    L.infima_.push_back(std::move(inf));
    L.increments_.push_back(std::move(inc));
    L.weight_prefix_.push_back(std::move(prefix));
  }
  // Guard against rounding that would make the cumulative law decrease.
  for (int n = 1; n <= depth; ++n) L.cumulative_[n] = std::max(L.cumulative_[n], L.cumulative_[n - 1]);
  return L;
}

void InfimumLadder::check_level(int n) const {
  if (n < 0) fail(ErrorKind::Domain, "depth must be nonnegative");
  if (n > depth_) {
    fail(ErrorKind::Depth, "depth " + std::to_string(n) + " exceeds the ladder depth " + std::to_string(depth_));
  }
}

std::span<const double> InfimumLadder::infima(int n) const {
  check_level(n);
  return infima_[n];
}

std::span<const double> InfimumLadder::increments(int n) const {
  check_level(n);
  return increments_[n];
}

double InfimumLadder::prob_n_le(int n) const {
  check_level(n);
  return cumulative_[n];
}

std::uint64_t InfimumLadder::cell_of(const FixedPointReal& x, int n) const {
  if (x.precision_bits() >= FixedPointReal::required_bits(q_, n)) return digits_of(x, q_, n).cell_index();
  return digits_of(FixedPointReal::from_double(x.to_double(), FixedPointReal::required_bits(q_, n)), q_, n)
      .cell_index();
}

double InfimumLadder::cond_prob_n_le(const FixedPointReal& x, int n) const {
  check_level(n);
  const double fx = model_->density_at(x.to_double());
  if (!(fx > 0.0)) fail(ErrorKind::ZeroDensity, "conditional law of N is undefined where f(x) = 0");
  return std::min(1.0, infima_[n][cell_of(x, n)] / fx);
}

double InfimumLadder::cond_prob_n_le(double x, int n) const {
  if (!(x >= 0.0 && x < 1.0)) fail(ErrorKind::Domain, "x must lie in [0,1)");
  return cond_prob_n_le(FixedPointReal::from_double(x, FixedPointReal::required_bits(q_, std::max(n, 0))), n);
}

TailEnvelope InfimumLadder::envelope(int n) const {
  check_level(n);
  if (!model_->tail_convex_decreasing()) {
    fail(ErrorKind::Shape, "model " + model_->spec() + " does not declare a convex decreasing conditional tail");
  }
  const auto& inf = infima_[n];
  const double cells = static_cast<double>(inf.size());
  std::vector<EnvelopeSegment> segs(inf.size());
  auto tail = [&](double fx, double m) {
    if (std::isinf(fx)) return 1.0;
    if (!(fx > 0.0)) return 0.0;
    return std::clamp(1.0 - m / fx, 0.0, 1.0);
  };
  for (std::size_t k = 0; k < inf.size(); ++k) {
    const double a = static_cast<double>(k) / cells;
    const double b = static_cast<double>(k + 1) / cells;
    // The right-end limit of f: one ulp inside the cell.
    const double fb = model_->density_at(std::nextafter(b, a));
    segs[k] = {a, b, tail(model_->density_at(a), inf[k]), tail(fb, inf[k])};
  }
  return TailEnvelope(q_, n, std::move(segs));
}

CouplingSample InfimumLadder::sample(numerics::Rng& rng) const {
  if (!(cumulative_[depth_] > 0.0)) {
    fail(ErrorKind::Domain, "P(N <= D) is zero for this ladder; increase the depth");
  }
  CouplingSample s;
  const double u1 = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u1);
  if (it != cumulative_.end()) {
    const int n = static_cast<int>(it - cumulative_.begin());
    const auto& prefix = weight_prefix_[n];
    const double target = rng.uniform() * prefix.back();
    auto kt = std::upper_bound(prefix.begin(), prefix.end(), target);
    if (kt == prefix.end()) kt = std::prev(kt);
    s.n = n;
    s.k = static_cast<std::uint64_t>(kt - prefix.begin());
    s.u = rng.uniform();
    const double cells = static_cast<double>(prefix.size());
    s.x = std::min((static_cast<double>(s.k) + s.u) / cells, std::nextafter(1.0, 0.0));
    return s;
  }
  // Residual branch: density proportional to f(x) (1 - inf_{I_D(x)} f / f(x)).
  const auto bits = FixedPointReal::required_bits(q_, depth_);
  for (std::uint64_t tries = 0; tries < kRejectionBudget; ++tries) {
    const double x = model_->quantile(rng.uniform());
    const double accept = rng.uniform();
    if (!(x < 1.0)) continue;
    const double fx = model_->density_at(x);
    if (!(fx > 0.0)) continue;
    const double m = infima_[depth_][cell_of(FixedPointReal::from_double(x, bits), depth_)];
    const double p = std::isinf(fx) ? 1.0 : 1.0 - m / fx;
    if (accept < p) {
      s.x = x;
      return s;
    }
  }
  fail(ErrorKind::Rejection, "rejection sampler exhausted 10^6 proposals; the depth is too small for this model");
}

}  // namespace qrem
