#pragma once

#include <optional>
#include <utility>

#include "charts.hpp"
#include "simrl.hpp"

namespace steinspc {

struct CalibrationOptions
{
    double target_arl = kDefaultTargetArl;
    SimOptions sim;
    /// Half-width bracket [lo, hi]; searched automatically when absent.
    std::optional<std::pair<double, double>> bracket;
    /// Stop once ARL(hi) - ARL(lo) <= rel_tol * target.
    double rel_tol = 0.01;
    /// Or once hi - lo < min_width.
    double min_width = 1e-4;
    int max_iterations = 60;
};

struct CalibrationResult
{
    double limit = 0;
    RunLengthStats achieved;
    double bracket_lo = 0;
    double bracket_hi = 0;
    int evaluations = 0;
};

/*!
 * Finds the half-width L whose simulated zero-state in-control ARL is close
 * to the target.
 *
 * All trial values share the same substreams, so the simulated ARL is a
 * nondecreasing step function of L and bisection is exact for the seed.
 * Throws BracketError if the bracket does not enclose the target and
 * CalibrationError (with the best iterate) on hitting the iteration cap.
 */
CalibrationResult find_limit(ChartSpec const& spec_template,
                             CountModel const& model0,
                             CalibrationOptions const& opts);

/// Analytic c-chart ARL 1 / P(Poisson(mu0) >= threshold).
double c_chart_arl(double mu0, count_t threshold);

struct CChartDesign
{
    count_t threshold = 0;
    double achieved_arl = 0;
    /// Neighbours bracketing the target: below has ARL < target.
    count_t below_threshold = 0;
    double below_arl = 0;
    count_t above_threshold = 0;
    double above_arl = 0;
};

/// Picks whichever of the two thresholds bracketing the target ARL comes
/// closer to it (absolute difference).
CChartDesign c_chart_design(double mu0, double target_arl = kDefaultTargetArl);

}  // namespace steinspc
