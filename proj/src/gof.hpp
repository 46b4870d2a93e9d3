#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "density.hpp"
#include "fixed_point.hpp"

namespace qrem {

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int df = 0;
};

/// Pearson statistic of `counts` against equal expected counts, with the
/// chi-square(df = cells - 1) upper tail as p-value.
ChiSquareResult chi_square_counts(std::span<const std::uint64_t> counts);

/// Chi-square test for uniformity of the digit tuples (X_n, ..., X_{n+k-1}),
/// extracted exactly from each sample.
ChiSquareResult chi_square_uniform_digits(std::span<const FixedPointReal> samples, int q, int n, int k);

/// Kolmogorov-Smirnov distance between the empirical law of `samples` and `cdf`.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
/// Asymptotic p-value with Stephens' small-sample correction:
/// Q_KS((sqrt(m) + 0.12 + 0.11/sqrt(m)) D).
double ks_p_value(double statistic, std::size_t m);

/// Worker count: QREM_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int default_threads();

struct GofExperiment {
  DensityPtr model;
  int q = 2;
  int n = 1;            // first digit of the tuple (1-based)
  int k = 1;            // tuple length; q^k categories
  int sample_size = 1000;
  int replications = 2000;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  int threads = 0;      // 0: default_threads()

  static constexpr int kFullReplications = 10000;
};

struct GofResult {
  double rejection_rate = 0.0;
  std::uint64_t rejections = 0;
  int replications = 0;
  double standard_error = 0.0;  // sqrt(r (1 - r) / replications)
  double statistic_mean = 0.0;
  double statistic_sd = 0.0;
  double p_value_mean = 0.0;
  std::vector<std::string> warnings;
};

/// Runs the replications (replication i draws from RNG substream i of the
/// seed) and returns the fraction rejected at level alpha. Results do not
/// depend on the thread count.
GofResult rejection_rate(const GofExperiment& experiment);

/// P(X_n = 0) - P(X_n = q-1) under the Benford law, n = 1..n_max.
std::vector<double> digit_gap_curve(int q, int n_max);

}  // namespace qrem
