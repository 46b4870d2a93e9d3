#pragma once

namespace qrem::numerics {

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x). Series for
/// x < a + 1, Lentz continued fraction otherwise.
double gamma_q(double a, double x);

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
double chi_square_sf(double statistic, double df);

/// Asymptotic Kolmogorov survival function Q_KS(lambda) = 2 sum (-1)^(j-1) exp(-2 j^2 lambda^2).
double kolmogorov_sf(double lambda);

}  // namespace qrem::numerics
