#include "steinspc/phase1.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "steinspc/errors.hpp"
#include "steinspc/special.hpp"

namespace steinspc {
namespace {

constexpr int kMaxEmIterations = 1'000'000;
constexpr double kEmTolerance = 1e-10;

struct Summary
{
    double n = 0;
    double mean = 0;
    double variance = 0;  // divisor n - 1
};

Summary summarize(std::span<count_t const> data)
{
    Summary s;
    s.n = static_cast<double>(data.size());
    for (count_t x : data)
    {
        if (x < 0)
            throw InputError("counts must be nonnegative");
        s.mean += static_cast<double>(x);
    }
    s.mean /= s.n;
    double ss = 0;
    for (count_t x : data)
    {
        double const d = static_cast<double>(x) - s.mean;
        ss += d * d;
    }
    s.variance = data.size() > 1 ? ss / (s.n - 1.0) : 0.0;
    return s;
}

}  // namespace

double dispersion_pvalue(double disp_hat, std::size_t t0)
{
    if (t0 < 2)
        throw DegenerateDataError("dispersion test needs at least two observations");
    double const df = static_cast<double>(t0 - 1);
    return chi2_sf(df, df * disp_hat);
}

DispersionTest dispersion_test(std::span<count_t const> data)
{
    if (data.size() < 2)
        throw DegenerateDataError("dispersion test needs at least two observations");
    auto const s = summarize(data);
    if (!(s.mean > 0))
        throw DegenerateDataError("dispersion index undefined for all-zero data");
    double const disp_hat = s.variance / s.mean;
    return {disp_hat, dispersion_pvalue(disp_hat, data.size())};
}

std::vector<AcfEntry> acf(std::span<count_t const> data, std::size_t max_lag)
{
    if (data.size() <= max_lag)
        throw ParameterError("ACF needs more observations than the maximum lag");
    auto const s = summarize(data);
    std::vector<double> centered(data.size());
    std::transform(data.begin(), data.end(), centered.begin(),
                   [&](count_t x) { return static_cast<double>(x) - s.mean; });
    double c0 = 0;
    for (double d : centered)
        c0 += d * d;
    if (!(c0 > 0))
        throw DegenerateDataError("ACF undefined for a constant series");

    double const bound = 1.96 / std::sqrt(s.n);
    std::vector<AcfEntry> out;
    out.reserve(max_lag);
    for (std::size_t lag = 1; lag <= max_lag; ++lag)
    {
        double ck = 0;
        for (std::size_t t = 0; t + lag < centered.size(); ++t)
            ck += centered[t] * centered[t + lag];
        double const r = ck / c0;
        out.push_back({lag, r, bound, std::fabs(r) > bound});
    }
    return out;
}

double fit_poisson(std::span<count_t const> data)
{
    if (data.empty())
        throw DegenerateDataError("cannot estimate a mean from no data");
    return summarize(data).mean;
}

namespace {

struct ZipSufficient
{
    double n = 0;
    double zeros = 0;
    double sum = 0;
    double log_factorials = 0;  // sum of ln x! over the data
};

ZipSufficient zip_sufficient(std::span<count_t const> data)
{
    ZipSufficient s;
    s.n = static_cast<double>(data.size());
    for (count_t x : data)
    {
        if (x < 0)
            throw InputError("counts must be nonnegative");
        if (x == 0)
            s.zeros += 1;
        s.sum += static_cast<double>(x);
        s.log_factorials += std::lgamma(static_cast<double>(x) + 1.0);
    }
    return s;
}

double zip_loglik(ZipSufficient const& s, double omega, double lambda)
{
    double const positives = s.n - s.zeros;
    double ll = s.sum * std::log(lambda) - positives * lambda - s.log_factorials;
    if (positives > 0)
        ll += positives * std::log1p(-omega);
    if (s.zeros > 0)
        ll += s.zeros * std::log(omega + (1.0 - omega) * std::exp(-lambda));
    return ll;
}

}  // namespace

double zip_loglik(std::span<count_t const> data, double omega, double lambda)
{
    if (!(omega >= 0 && omega < 1) || !(lambda > 0))
        throw ParameterError("ZIP log-likelihood needs 0 <= omega < 1 and lambda > 0");
    return zip_loglik(zip_sufficient(data), omega, lambda);
}

ZipFit fit_zip_ml(std::span<count_t const> data)
{
    if (data.size() < 2)
        throw DegenerateDataError("ZIP fit needs at least two observations");
    auto const s = zip_sufficient(data);
    if (!(s.sum > 0))
        throw DegenerateDataError("ZIP fit undefined for all-zero data");

    double const mean = s.sum / s.n;
    double const zero_share = s.zeros / s.n;
    double const poisson_zero = std::exp(-mean);

    ZipFit fit;
    if (zero_share <= poisson_zero)
    {
        // The score in omega at (0, mean) is n0 e^mean - n <= 0.
        fit.omega = 0;
        fit.lambda = mean;
        fit.loglik = zip_loglik(s, 0, mean);
        fit.loglik_trace.push_back(fit.loglik);
        return fit;
    }

    double omega = (zero_share - poisson_zero) / (1.0 - poisson_zero);
    double lambda = mean / (1.0 - omega);
    double ll = zip_loglik(s, omega, lambda);
    fit.loglik_trace.push_back(ll);
    for (int it = 1; it <= kMaxEmIterations; ++it)
    {
        // E-step: posterior share of structural zeros among observed zeros.
        double const structural = omega / (omega + (1.0 - omega) * std::exp(-lambda));
        double const expected_structural = s.zeros * structural;
        omega = expected_structural / s.n;
        lambda = s.sum / (s.n - expected_structural);
        double const next = zip_loglik(s, omega, lambda);
        fit.loglik_trace.push_back(next);
        fit.iterations = it;
        bool const converged = std::fabs(next - ll) < kEmTolerance;
        ll = next;
        if (converged)
        {
            fit.omega = omega;
            fit.lambda = lambda;
            fit.loglik = ll;
            return fit;
        }
    }
    throw EstimationError("ZIP EM did not converge");
}

Phase1Report phase1_report(std::span<count_t const> data, std::size_t max_lag)
{
    if (data.empty())
        throw DegenerateDataError("Phase-I analysis needs data");
    Phase1Report report;
    report.t0 = data.size();
    report.mean = fit_poisson(data);
    auto const test = dispersion_test(data);
    report.disp_hat = test.disp_hat;
    report.disp_pvalue = test.pvalue;
    std::size_t const lags = std::min(max_lag, data.size() - 1);
    if (lags > 0)
    {
        try
        {
            report.acf = acf(data, lags);
        }
        catch (DegenerateDataError const&)
        {
            report.acf.clear();
        }
    }
    report.zip_fit = fit_zip_ml(data);
    return report;
}

}  // namespace steinspc
