#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dist.hpp"

namespace steinspc {

struct DispersionTest
{
    double disp_hat;
    double pvalue;
};

/// Upper-tailed test of I = 1 against overdispersion: (T0-1) * I_hat is
/// compared to chi^2 with T0-1 degrees of freedom. The sample variance uses
/// divisor T0-1.
DispersionTest dispersion_test(std::span<count_t const> data);

/// p-value for a given sample dispersion index and sample size.
double dispersion_pvalue(double disp_hat, std::size_t t0);

struct AcfEntry
{
    std::size_t lag;
    double value;
    double bound;  ///< 1.96 / sqrt(T0)
    bool significant;
};

std::vector<AcfEntry> acf(std::span<count_t const> data, std::size_t max_lag);

double fit_poisson(std::span<count_t const> data);

struct ZipFit
{
    double omega = 0;
    double lambda = 0;
    double loglik = 0;
    int iterations = 0;
    /// Log-likelihood after each EM iteration (first entry: start value).
    std::vector<double> loglik_trace;
};

/// ZIP log-likelihood of `data` at (omega, lambda).
double zip_loglik(std::span<count_t const> data, double omega, double lambda);

/*!
 * ZIP maximum likelihood by EM.
 *
 * If the observed zero share does not exceed exp(-mean) the maximum sits on
 * the boundary omega = 0 with lambda = mean. Otherwise EM starts from the
 * moment estimates and stops when successive log-likelihoods differ by less
 * than 1e-10.
 */
ZipFit fit_zip_ml(std::span<count_t const> data);

struct Phase1Report
{
    std::size_t t0 = 0;
    double mean = 0;
    double disp_hat = 0;
    double disp_pvalue = 1;
    std::vector<AcfEntry> acf;
    std::optional<ZipFit> zip_fit;
};

/// Runs every diagnostic that the data supports.
Phase1Report phase1_report(std::span<count_t const> data, std::size_t max_lag);

}  // namespace steinspc
