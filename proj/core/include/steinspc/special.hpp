#pragma once

namespace steinspc {

/// Regularized lower incomplete gamma P(a, x) for a > 0, x >= 0.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// without cancellation in the upper tail.
double gamma_q(double a, double x);

/// Upper tail P(chi^2_df >= x).
double chi2_sf(double df, double x);

/// P(Poisson(mu) >= k); equals 1 for k <= 0.
double poisson_upper_tail(double mu, long long k);

}  // namespace steinspc
