#include "steinspc/special.hpp"

#include <cmath>
#include <limits>

#include "steinspc/errors.hpp"

namespace steinspc {
namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

// log(x^a e^-x / Gamma(a)), the common prefactor.
double log_prefactor(double a, double x)
{
    return a * std::log(x) - x - std::lgamma(a);
}

// P(a, x) by its power series; converges quickly for x < a + 1.
double lower_series(double a, double x)
{
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxIterations; ++n)
    {
        term *= x / (a + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps)
        {
            return sum * std::exp(log_prefactor(a, x));
        }
    }
    throw EstimationError("incomplete gamma series did not converge");
}

// Q(a, x) by the Legendre continued fraction (modified Lentz); for x >= a + 1.
double upper_fraction(double a, double x)
{
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i)
    {
        double const an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny)
            d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        double const delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps)
        {
            return std::exp(log_prefactor(a, x)) * h;
        }
    }
    throw EstimationError("incomplete gamma continued fraction did not converge");
}

void check_args(double a, double x)
{
    if (!(a > 0) || !(x >= 0) || std::isinf(a))
    {
        throw ParameterError("incomplete gamma requires a > 0 and x >= 0");
    }
}

}  // namespace

double gamma_p(double a, double x)
{
    check_args(a, x);
    if (x == 0)
        return 0.0;
    if (std::isinf(x))
        return 1.0;
    if (x < a + 1.0)
        return lower_series(a, x);
    return 1.0 - upper_fraction(a, x);
}

double gamma_q(double a, double x)
{
    check_args(a, x);
    if (x == 0)
        return 1.0;
    if (std::isinf(x))
        return 0.0;
    if (x < a + 1.0)
        return 1.0 - lower_series(a, x);
    return upper_fraction(a, x);
}

double chi2_sf(double df, double x)
{
    if (x <= 0)
        return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

double poisson_upper_tail(double mu, long long k)
{
    if (k <= 0)
        return 1.0;
    // P(X >= k) = P(k, mu), the regularized lower incomplete gamma.
    return gamma_p(static_cast<double>(k), mu);
}

}  // namespace steinspc
