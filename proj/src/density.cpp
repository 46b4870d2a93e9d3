#include "density.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "errors.hpp"
#include "fixed_point.hpp"
#include "numerics/roots.hpp"

namespace qrem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Grid resolution for certified infima of general densities. With G points the
// Lipschitz correction is deriv_sup * width / (2G).
constexpr int kInfimumGrid = 8192;

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::uint64_t checked_power(int q, int n, std::uint64_t limit) {
  std::uint64_t p = 1;
  for (int i = 0; i < n; ++i) {
    if (p > limit / static_cast<std::uint64_t>(q)) {
      fail(ErrorKind::Budget, "q^n = " + std::to_string(q) + "^" + std::to_string(n) + " exceeds the cell budget");
    }
    p *= static_cast<std::uint64_t>(q);
  }
  return p;
}

}  // namespace

const char* to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::Increasing: return "increasing";
    case Monotonicity::Decreasing: return "decreasing";
    case Monotonicity::PiecewiseConstant: return "piecewise-constant";
    case Monotonicity::General: return "general";
  }
  return "general";
}

// ---------------------------------------------------------------------------
// UnitDensity

double UnitDensity::pdf(double x) const {
  if (!(x >= 0.0 && x < 1.0)) fail(ErrorKind::Domain, "pdf argument must lie in [0,1)");
  const double v = density_at(x);
  return std::isinf(v) ? kSingularSentinel : v;
}

double UnitDensity::cdf(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) fail(ErrorKind::Domain, "cdf argument must lie in [0,1]");
  if (x == 1.0) return 1.0;
  return cumulative_at(x);
}

double UnitDensity::derivative_at(double) const {
  fail(ErrorKind::Unsupported, "model " + spec() + " has no derivative");
}

double UnitDensity::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) fail(ErrorKind::Domain, "quantile level must lie in [0,1]");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return 1.0;
  auto g = [&](double x) { return cumulative_at(x) - u; };
  auto dg = [&](double x) { return density_at(x); };
  numerics::RootOptions opts;
  opts.x_rel_tol = 1e-14;
  const double x = numerics::newton_bisect(g, dg, 0.0, 1.0, u, opts).x;
  return std::min(x, std::nextafter(1.0, 0.0));
}

double UnitDensity::infimum_on(double a, double b) const {
  switch (monotonicity()) {
    case Monotonicity::Increasing: return density_at(a);
    case Monotonicity::Decreasing: return density_at(b);  // limit at the open right end
    default: break;
  }
  const auto lip = deriv_sup();
  if (!lip) {
    fail(ErrorKind::Unsupported,
         "model " + spec() + " has neither monotonicity metadata nor a derivative bound; infimum cannot be certified");
  }
  double lo = kInf;
  for (int i = 0; i <= kInfimumGrid; ++i) lo = std::min(lo, density_at(a + (b - a) * i / kInfimumGrid));
  return std::max(0.0, lo - *lip * (b - a) / (2.0 * kInfimumGrid));
}

double UnitDensity::abs_deriv_sup_on(double, double) const {
  if (auto s = deriv_sup()) return *s;
  fail(ErrorKind::Unsupported, "model " + spec() + " has no derivative bound");
}

double UnitDensity::pdf_sup_on(double a, double b) const {
  switch (monotonicity()) {
    case Monotonicity::Increasing: return density_at(b);
    case Monotonicity::Decreasing: return density_at(a);
    default: break;
  }
  if (auto s = pdf_sup()) return *s;
  fail(ErrorKind::Unsupported, "model " + spec() + " has no sup-norm metadata");
}

double UnitDensity::interval_infimum(std::uint64_t k, int n, int q) const {
  if (q < 2) fail(ErrorKind::Domain, "base q must be at least 2");
  if (n < 0) fail(ErrorKind::Domain, "depth must be nonnegative");
  const std::uint64_t cells = checked_power(q, n, std::uint64_t{1} << 62);
  if (k < 1 || k > cells) fail(ErrorKind::Domain, "cell index out of range");
  return cell_infimum(k, n, q);
}

double UnitDensity::cell_infimum(std::uint64_t k, int n, int q) const {
  const double cells = std::pow(static_cast<double>(q), n);
  return infimum_on(static_cast<double>(k - 1) / cells, static_cast<double>(k) / cells);
}

// ---------------------------------------------------------------------------
// Benford

BenfordDensity::BenfordDensity(int q) : q_(q), inv_log_q_(0.0) {
  if (q < 2) fail(ErrorKind::Domain, "Benford base must be at least 2");
  if (q > 1 << 20) fail(ErrorKind::Domain, "Benford base too large");
  inv_log_q_ = 1.0 / std::log(static_cast<double>(q));
}

double BenfordDensity::density_at(double x) const {
  double s = 0.0;
  for (int j = q_ - 1; j >= 1; --j) s += 1.0 / (j + x);
  return s * inv_log_q_;
}

double BenfordDensity::cumulative_at(double x) const {
  double s = 0.0;
  for (int j = q_ - 1; j >= 1; --j) s += std::log1p(x / j);
  return s * inv_log_q_;
}

double BenfordDensity::mass(double a, double b) const { return mass_width(a, b - a); }

double BenfordDensity::mass_width(double a, double h) const {
  double s = 0.0;
  for (int j = q_ - 1; j >= 1; --j) s += std::log1p(h / (j + a));
  return s * inv_log_q_;
}

double BenfordDensity::derivative_at(double x) const {
  double s = 0.0;
  for (int j = q_ - 1; j >= 1; --j) s += 1.0 / ((j + x) * (j + x));
  return -s * inv_log_q_;
}

double BenfordDensity::quantile(double u) const {
  if (q_ == 2 && u >= 0.0 && u <= 1.0) {
    // F(x) = log2(1 + x)
    return std::min(std::expm1(u * std::log(2.0)), std::nextafter(1.0, 0.0));
  }
  return UnitDensity::quantile(u);
}

std::string BenfordDensity::spec() const { return "benford:q=" + std::to_string(q_); }

std::optional<double> BenfordDensity::deriv_sup() const { return -derivative_at(0.0); }

std::optional<double> BenfordDensity::deriv2_sup() const {
  double s = 0.0;
  for (int j = q_ - 1; j >= 1; --j) s += 2.0 / (static_cast<double>(j) * j * j);
  return s * inv_log_q_;
}

std::optional<double> BenfordDensity::deriv_l1() const { return density_at(0.0) - density_at(1.0); }

std::optional<double> BenfordDensity::pdf_sup() const { return density_at(0.0); }

double BenfordDensity::abs_deriv_sup_on(double a, double) const { return -derivative_at(a); }

// ---------------------------------------------------------------------------
// Power

PowerDensity::PowerDensity(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorKind::Domain, "power density needs alpha > 0");
}

double PowerDensity::density_at(double x) const {
  if (x <= 0.0) {
    if (alpha_ < 1.0) return kInf;
    return alpha_ == 1.0 ? 1.0 : 0.0;
  }
  return alpha_ * std::pow(x, alpha_ - 1.0);
}

double PowerDensity::cumulative_at(double x) const { return x <= 0.0 ? 0.0 : std::pow(x, alpha_); }

double PowerDensity::mass(double a, double b) const { return mass_width(a, b - a); }

double PowerDensity::mass_width(double a, double h) const {
  if (a <= 0.0) return cumulative_at(h);
  return std::pow(a, alpha_) * std::expm1(alpha_ * std::log1p(h / a));
}

double PowerDensity::derivative_at(double x) const {
  if (alpha_ == 1.0) return 0.0;
  if (x <= 0.0) {
    if (alpha_ < 2.0) return alpha_ < 1.0 ? -kInf : kInf;
    return alpha_ == 2.0 ? 2.0 : 0.0;
  }
  return alpha_ * (alpha_ - 1.0) * std::pow(x, alpha_ - 2.0);
}

double PowerDensity::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) fail(ErrorKind::Domain, "quantile level must lie in [0,1]");
  return std::min(std::pow(u, 1.0 / alpha_), std::nextafter(1.0, 0.0));
}

std::string PowerDensity::spec() const { return "power:alpha=" + format_number(alpha_); }

Monotonicity PowerDensity::monotonicity() const {
  return alpha_ < 1.0 ? Monotonicity::Decreasing : Monotonicity::Increasing;
}

std::optional<double> PowerDensity::deriv_sup() const {
  if (alpha_ == 1.0) return 0.0;
  if (alpha_ >= 2.0) return alpha_ * (alpha_ - 1.0);
  return std::nullopt;
}

std::optional<double> PowerDensity::deriv2_sup() const {
  if (alpha_ == 1.0 || alpha_ == 2.0) return 0.0;
  if (alpha_ >= 3.0) return alpha_ * (alpha_ - 1.0) * (alpha_ - 2.0);
  return std::nullopt;
}

std::optional<double> PowerDensity::deriv_l1() const {
  if (alpha_ < 1.0) return std::nullopt;
  return alpha_ - (alpha_ == 1.0 ? 1.0 : 0.0);  // f(1) - f(0+)
}

std::optional<double> PowerDensity::pdf_sup() const {
  if (alpha_ < 1.0) return std::nullopt;
  return alpha_;
}

double PowerDensity::abs_deriv_sup_on(double a, double b) const {
  if (alpha_ == 1.0) return 0.0;
  if (alpha_ == 2.0) return 2.0;
  return std::fabs(derivative_at(alpha_ < 2.0 ? a : b));
}

// ---------------------------------------------------------------------------
// Piecewise constant

PiecewiseConstantDensity::PiecewiseConstantDensity(int q, int m, std::vector<double> weights)
    : q_(q), m_(m), weights_(std::move(weights)) {
  if (q < 2) fail(ErrorKind::Domain, "piecewise-constant base must be at least 2");
  if (m < 0) fail(ErrorKind::Domain, "piecewise-constant level must be nonnegative");
  const std::uint64_t cells = checked_power(q, m, std::uint64_t{1} << 24);
  if (weights_.size() != cells) {
    fail(ErrorKind::InvalidArgument, "piecewise-constant density at level " + std::to_string(m) + " needs " +
                                         std::to_string(cells) + " weights, got " + std::to_string(weights_.size()));
  }
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) fail(ErrorKind::InvalidArgument, "weights must be finite and nonnegative");
  }
  const double width = 1.0 / static_cast<double>(cells);
  cumulative_.resize(cells + 1);
  cumulative_[0] = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    acc += weights_[i] * width;
    cumulative_[i + 1] = acc;
  }
  if (std::fabs(acc - 1.0) > 1e-10) {
    fail(ErrorKind::InvalidArgument, "weights must average to 1 (q^-m * sum = " + format_number(acc) + ")");
  }
}

std::shared_ptr<const PiecewiseConstantDensity> PiecewiseConstantDensity::uniform() {
  static const auto u = std::make_shared<const PiecewiseConstantDensity>(2, 0, std::vector<double>{1.0});
  return u;
}

bool PiecewiseConstantDensity::is_uniform() const noexcept {
  return std::all_of(weights_.begin(), weights_.end(), [&](double w) { return w == weights_.front(); });
}

std::size_t PiecewiseConstantDensity::cell_of(double x) const {
  if (m_ == 0) return 0;
  if (x >= 1.0) return weights_.size() - 1;
  if (x <= 0.0) return 0;
  const auto fx = FixedPointReal::from_double(x, FixedPointReal::required_bits(q_, m_));
  return static_cast<std::size_t>(digits_of(fx, q_, m_).cell_index());
}

double PiecewiseConstantDensity::density_at(double x) const { return weights_[cell_of(x)]; }

double PiecewiseConstantDensity::cumulative_at(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const std::size_t c = cell_of(x);
  const double cells = static_cast<double>(weights_.size());
  return cumulative_[c] + weights_[c] * (x - static_cast<double>(c) / cells);
}

double PiecewiseConstantDensity::mass_width(double a, double h) const {
  const double cells = static_cast<double>(weights_.size());
  if (a >= 0.0 && a < 1.0) {
    const std::size_t c = cell_of(a);
    // both ends in one cell: no cancellation
    if (a + h <= static_cast<double>(c + 1) / cells) return weights_[c] * h;
  }
  return mass(a, a + h);
}

double PiecewiseConstantDensity::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) fail(ErrorKind::Domain, "quantile level must lie in [0,1]");
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  std::size_t c = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
  c = std::clamp<std::size_t>(c, 1, weights_.size()) - 1;
  while (weights_[c] == 0.0 && c + 1 < weights_.size()) ++c;
  const double cells = static_cast<double>(weights_.size());
  const double x = static_cast<double>(c) / cells + (u - cumulative_[c]) / weights_[c];
  return std::clamp(x, 0.0, std::nextafter(1.0, 0.0));
}

std::string PiecewiseConstantDensity::spec() const {
  if (m_ == 0) return "uniform";
  std::ostringstream os;
  os << "pwc:q=" << q_ << ",m=" << m_ << ",w=";
  for (std::size_t i = 0; i < weights_.size(); ++i) os << (i ? ";" : "") << format_number(weights_[i]);
  return os.str();
}

std::optional<double> PiecewiseConstantDensity::deriv_sup() const {
  if (is_uniform()) return 0.0;
  return std::nullopt;
}

std::optional<double> PiecewiseConstantDensity::pdf_sup() const {
  return *std::max_element(weights_.begin(), weights_.end());
}

double PiecewiseConstantDensity::cell_infimum(std::uint64_t k, int n, int q) const {
  if (q != q_) return UnitDensity::cell_infimum(k, n, q);
  if (n >= m_) return weights_[(k - 1) / checked_power(q_, n - m_, std::uint64_t{1} << 62)];
  const std::uint64_t span = checked_power(q_, m_ - n, weights_.size());
  const auto first = weights_.begin() + static_cast<std::ptrdiff_t>((k - 1) * span);
  return *std::min_element(first, first + static_cast<std::ptrdiff_t>(span));
}

namespace {
std::pair<std::size_t, std::size_t> cell_range(double a, double b, std::size_t cells) {
  const double c = static_cast<double>(cells);
  auto lo = static_cast<std::size_t>(std::clamp(std::floor(a * c), 0.0, c - 1));
  auto hi = static_cast<std::size_t>(std::clamp(std::ceil(b * c) - 1.0, 0.0, c - 1));
  return {lo, std::max(lo, hi)};
}
}  // namespace

double PiecewiseConstantDensity::infimum_on(double a, double b) const {
  auto [lo, hi] = cell_range(a, b, weights_.size());
  return *std::min_element(weights_.begin() + lo, weights_.begin() + hi + 1);
}

double PiecewiseConstantDensity::abs_deriv_sup_on(double a, double b) const {
  auto [lo, hi] = cell_range(a, b, weights_.size());
  const bool flat = std::all_of(weights_.begin() + lo, weights_.begin() + hi + 1,
                                [&](double w) { return w == weights_[lo]; });
  return flat ? 0.0 : kInf;
}

double PiecewiseConstantDensity::pdf_sup_on(double a, double b) const {
  auto [lo, hi] = cell_range(a, b, weights_.size());
  return *std::max_element(weights_.begin() + lo, weights_.begin() + hi + 1);
}

// ---------------------------------------------------------------------------
// Punctured uniform

PuncturedUniformDensity::PuncturedUniformDensity(double x0) : x0_(x0) {
  if (!(x0 >= 0.0 && x0 < 1.0)) fail(ErrorKind::Domain, "puncture point must lie in [0,1)");
}

std::string PuncturedUniformDensity::spec() const { return "punctured:x0=" + format_number(x0_); }

double PuncturedUniformDensity::infimum_on(double a, double b) const { return (x0_ >= a && x0_ < b) ? 0.0 : 1.0; }

double PuncturedUniformDensity::cell_infimum(std::uint64_t k, int n, int q) const {
  const auto fx = FixedPointReal::from_double(x0_, FixedPointReal::required_bits(q, n));
  return digits_of(fx, q, n).cell_index() == k - 1 ? 0.0 : 1.0;
}

// ---------------------------------------------------------------------------
// Clipped proxy

ClippedDensity::ClippedDensity(DensityPtr base, double eps) : base_(std::move(base)), eps_(eps), norm_(1.0) {
  if (!base_) fail(ErrorKind::InvalidArgument, "clipped density needs a base model");
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorKind::Domain, "clip point must lie in (0,1)");
  norm_ = eps_ * base_->density_at(eps_) + (1.0 - base_->cumulative_at(eps_));
}

double ClippedDensity::density_at(double x) const { return base_->density_at(std::max(x, eps_)) / norm_; }

double ClippedDensity::cumulative_at(double x) const {
  if (x <= 0.0) return 0.0;
  if (x < eps_) return x * base_->density_at(eps_) / norm_;
  return (eps_ * base_->density_at(eps_) + base_->mass(eps_, x)) / norm_;
}

double ClippedDensity::derivative_at(double x) const { return x < eps_ ? 0.0 : base_->derivative_at(x) / norm_; }

std::string ClippedDensity::spec() const { return "clip:eps=" + format_number(eps_) + ":" + base_->spec(); }

std::optional<double> ClippedDensity::deriv_sup() const {
  const double s = base_->abs_deriv_sup_on(eps_, 1.0);
  if (!std::isfinite(s)) return std::nullopt;
  return s / norm_;
}

std::optional<double> ClippedDensity::pdf_sup() const {
  const double s = base_->pdf_sup_on(eps_, 1.0);
  if (!std::isfinite(s)) return std::nullopt;
  return s / norm_;
}

double ClippedDensity::abs_deriv_sup_on(double a, double b) const {
  if (b <= eps_) return 0.0;
  return base_->abs_deriv_sup_on(std::max(a, eps_), b) / norm_;
}

// ---------------------------------------------------------------------------
// Function-backed

FunctionDensity::FunctionDensity(Parts parts) : parts_(std::move(parts)) {
  if (!parts_.pdf || !parts_.cdf) fail(ErrorKind::InvalidArgument, "function density needs pdf and cdf");
}

double FunctionDensity::derivative_at(double x) const {
  if (!parts_.derivative) return UnitDensity::derivative_at(x);
  return parts_.derivative(x);
}

// ---------------------------------------------------------------------------
// Product

ProductDensity::ProductDensity(std::vector<DensityPtr> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) fail(ErrorKind::InvalidArgument, "product density needs at least one factor");
  for (const auto& f : factors_) {
    if (!f) fail(ErrorKind::InvalidArgument, "null factor in product density");
  }
}

std::string ProductDensity::spec() const {
  std::string s = "product:";
  for (std::size_t i = 0; i < factors_.size(); ++i) s += (i ? "|" : "") + factors_[i]->spec();
  return s;
}

double ProductDensity::pdf(std::span<const double> x) const {
  if (x.size() != factors_.size()) fail(ErrorKind::InvalidArgument, "point dimension does not match the product");
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) v *= factors_[i]->pdf(x[i]);
  return v;
}

std::optional<double> ProductDensity::gradient_sup() const {
  std::vector<double> d, s;
  for (const auto& f : factors_) {
    auto ds = f->deriv_sup();
    auto ps = f->pdf_sup();
    if (!ds || !ps) return std::nullopt;
    d.push_back(*ds);
    s.push_back(*ps);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double term = d[i];
    for (std::size_t l = 0; l < s.size(); ++l) {
      if (l != i) term *= s[l];
    }
    acc += term * term;
  }
  return std::sqrt(acc);
}

// ---------------------------------------------------------------------------
// Spec parsing

namespace {

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto res = std::from_chars(begin, end, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != end) {
    fail(ErrorKind::Parse, "cannot parse " + what + " from '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  int v = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto res = std::from_chars(begin, end, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != end) {
    fail(ErrorKind::Parse, "cannot parse integer " + what + " from '" + text + "'");
  }
  return v;
}

std::map<std::string, std::string> parse_params(const std::string& text, const std::string& model) {
  std::map<std::string, std::string> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) fail(ErrorKind::Parse, "malformed parameter '" + item + "' in " + model);
    const std::string key = item.substr(0, eq);
    if (out.count(key)) fail(ErrorKind::Parse, "duplicate parameter '" + key + "' in " + model);
    out[key] = item.substr(eq + 1);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void expect_keys(const std::map<std::string, std::string>& params, std::initializer_list<const char*> keys,
                 const std::string& model) {
  for (const auto& [k, v] : params) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* key) { return k == key; })) {
      fail(ErrorKind::Parse, "unknown parameter '" + k + "' for model " + model);
    }
  }
  for (const char* key : keys) {
    if (!params.count(key)) fail(ErrorKind::Parse, std::string("missing parameter '") + key + "' for model " + model);
  }
}

}  // namespace

DensityPtr parse_density(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? std::string() : spec.substr(colon + 1);

  if (name == "uniform") {
    if (!rest.empty()) fail(ErrorKind::Parse, "uniform takes no parameters");
    return PiecewiseConstantDensity::uniform();
  }
  if (name == "benford") {
    auto p = parse_params(rest, name);
    expect_keys(p, {"q"}, name);
    return std::make_shared<BenfordDensity>(parse_int(p["q"], "q"));
  }
  if (name == "power") {
    auto p = parse_params(rest, name);
    expect_keys(p, {"alpha"}, name);
    return std::make_shared<PowerDensity>(parse_number(p["alpha"], "alpha"));
  }
  if (name == "pwc") {
    auto p = parse_params(rest, name);
    expect_keys(p, {"q", "m", "w"}, name);
    std::vector<double> w;
    std::size_t pos = 0;
    const std::string& text = p["w"];
    while (true) {
      const std::size_t semi = text.find(';', pos);
      w.push_back(parse_number(text.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos), "weight"));
      if (semi == std::string::npos) break;
      pos = semi + 1;
    }
    return std::make_shared<PiecewiseConstantDensity>(parse_int(p["q"], "q"), parse_int(p["m"], "m"), std::move(w));
  }
  if (name == "punctured") {
    auto p = parse_params(rest, name);
    expect_keys(p, {"x0"}, name);
    return std::make_shared<PuncturedUniformDensity>(parse_number(p["x0"], "x0"));
  }
  if (name == "clip") {
    const std::size_t sep = rest.find(':');
    if (sep == std::string::npos) fail(ErrorKind::Parse, "clip expects clip:eps=<value>:<model>");
    auto p = parse_params(rest.substr(0, sep), name);
    expect_keys(p, {"eps"}, name);
    return std::make_shared<ClippedDensity>(parse_density(rest.substr(sep + 1)), parse_number(p["eps"], "eps"));
  }
  if (name == "product") fail(ErrorKind::Parse, "product model is not a density on [0,1)");
  fail(ErrorKind::Parse, "unknown model '" + name + "'");
}

Model parse_model(const std::string& spec) {
  if (spec.rfind("product:", 0) == 0) {
    std::vector<DensityPtr> factors;
    const std::string rest = spec.substr(8);
    std::size_t pos = 0;
    while (true) {
      const std::size_t bar = rest.find('|', pos);
      factors.push_back(parse_density(rest.substr(pos, bar == std::string::npos ? std::string::npos : bar - pos)));
      if (bar == std::string::npos) break;
      pos = bar + 1;
    }
    return Model{nullptr, std::make_shared<ProductDensity>(std::move(factors))};
  }
  return Model{parse_density(spec), nullptr};
}

}  // namespace qrem
