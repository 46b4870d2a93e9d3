#include "gof.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "errors.hpp"
#include "numerics/rng.hpp"
#include "numerics/special.hpp"
#include "numerics/summation.hpp"
#include "remainder.hpp"

namespace qrem {

namespace {

std::uint64_t category_count(int q, int k) {
  if (q < 2) fail(ErrorKind::Domain, "base q must be at least 2");
  if (k < 1) fail(ErrorKind::Domain, "tuple length k must be at least 1");
  return cell_count(q, k, std::uint64_t{1} << 20);
}

}  // namespace

ChiSquareResult chi_square_counts(std::span<const std::uint64_t> counts) {
  if (counts.size() < 2) fail(ErrorKind::InvalidArgument, "chi-square test needs at least two categories");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) fail(ErrorKind::InvalidArgument, "chi-square test on an empty sample");
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  numerics::CompensatedSum s;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    s += d * d / expected;
  }
  ChiSquareResult r;
  r.statistic = s.value();
  r.df = static_cast<int>(counts.size()) - 1;
  r.p_value = numerics::chi_square_sf(r.statistic, r.df);
  return r;
}

ChiSquareResult chi_square_uniform_digits(std::span<const FixedPointReal> samples, int q, int n, int k) {
  if (samples.empty()) fail(ErrorKind::InvalidArgument, "chi-square test on an empty sample");
  std::vector<std::uint64_t> counts(category_count(q, k), 0);
  for (const auto& x : samples) ++counts[digit_window_index(x, q, n, k)];
  return chi_square_counts(counts);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) fail(ErrorKind::InvalidArgument, "KS statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double m = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / m - F, F - static_cast<double>(i) / m});
  }
  return d;
}

double ks_p_value(double statistic, std::size_t m) {
  const double sm = std::sqrt(static_cast<double>(m));
  return numerics::kolmogorov_sf((sm + 0.12 + 0.11 / sm) * statistic);
}

int default_threads() {
  if (const char* env = std::getenv("QREM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

GofResult rejection_rate(const GofExperiment& e) {
  if (!e.model) fail(ErrorKind::InvalidArgument, "experiment needs a model");
  if (e.n < 1) fail(ErrorKind::Domain, "digit offset n must be at least 1");
  if (e.sample_size < 1) fail(ErrorKind::Domain, "sample size must be positive");
  if (e.replications < 1) fail(ErrorKind::Domain, "replication count must be positive");
  if (!(e.alpha > 0.0 && e.alpha < 1.0)) fail(ErrorKind::Domain, "significance level must lie in (0,1)");
  const std::uint64_t cats = category_count(e.q, e.k);
  const int bits = FixedPointReal::required_bits(e.q, e.n + e.k - 1);

  GofResult res;
  res.replications = e.replications;
  const double expected = static_cast<double>(e.sample_size) / static_cast<double>(cats);
  if (expected < 5.0) {
    res.warnings.push_back("expected count per category is " + std::to_string(expected) +
                           " (< 5); the chi-square approximation is unreliable");
  }

  std::vector<ChiSquareResult> stats(static_cast<std::size_t>(e.replications));
  auto work = [&](int begin, int end) {
    std::vector<std::uint64_t> counts(cats);
    for (int rep = begin; rep < end; ++rep) {
      numerics::Rng rng(e.seed, static_cast<std::uint64_t>(rep));
      std::fill(counts.begin(), counts.end(), 0);
      for (int i = 0; i < e.sample_size; ++i) {
        const double x = std::min(e.model->quantile(rng.uniform()), std::nextafter(1.0, 0.0));
        ++counts[digit_window_index(FixedPointReal::from_double(x, bits), e.q, e.n, e.k)];
      }
      stats[static_cast<std::size_t>(rep)] = chi_square_counts(counts);
    }
  };

  const int threads = std::clamp(e.threads > 0 ? e.threads : default_threads(), 1, e.replications);
  if (threads == 1) {
    work(0, e.replications);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    const int chunk = (e.replications + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int b = t * chunk, en = std::min(e.replications, b + chunk);
      pool.emplace_back([&, t, b, en] {
        try {
          work(b, en);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  numerics::CompensatedSum sum, sum_sq, sum_p;
  for (const auto& s : stats) {
    if (s.p_value < e.alpha) ++res.rejections;
    sum += s.statistic;
    sum_p += s.p_value;
  }
  const double reps = static_cast<double>(e.replications);
  res.statistic_mean = sum.value() / reps;
  for (const auto& s : stats) sum_sq += (s.statistic - res.statistic_mean) * (s.statistic - res.statistic_mean);
  res.statistic_sd = e.replications > 1 ? std::sqrt(sum_sq.value() / (reps - 1.0)) : 0.0;
  res.p_value_mean = sum_p.value() / reps;
  res.rejection_rate = static_cast<double>(res.rejections) / reps;
  res.standard_error = std::sqrt(res.rejection_rate * (1.0 - res.rejection_rate) / reps);
  return res;
}

std::vector<double> digit_gap_curve(int q, int n_max) {
  if (n_max < 1) fail(ErrorKind::Domain, "n_max must be at least 1");
  std::vector<double> out;
  for (int n = 1; n <= n_max; ++n) out.push_back(benford_digit_gap(q, n));
  return out;
}

}  // namespace qrem
