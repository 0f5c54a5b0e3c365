#include "steinspc/calibrate.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>

#include "steinspc/errors.hpp"
#include "steinspc/special.hpp"

namespace steinspc {
namespace {

constexpr double kGrowth = 1.5;
constexpr int kMaxBracketSteps = 60;

// Rough scale of the plotted statistic's in-control spread; only used to
// seed the bracket search.
double spread_scale(ChartSpec const& spec)
{
    double const lambda = spec.lambda();
    double const ewma_factor = std::sqrt(lambda / (2.0 - lambda));
    if (spec.kind() == ChartKind::AbcEwma)
        return ewma_factor / std::sqrt(spec.mu0());
    return ewma_factor * std::sqrt(spec.mu0());
}

class ArlOracle
{
  public:
    ArlOracle(ChartSpec const& spec, CountModel const& model, SimOptions const& sim)
        : spec_(spec), model_(model), sim_(sim)
    {
    }

    RunLengthStats const& at(double limit)
    {
        auto it = cache_.find(limit);
        if (it != cache_.end())
            return it->second;
        RunLengthStats stats;
        try
        {
            stats = zero_state_arl(spec_.with_limit(limit), model_, sim_);
        }
        catch (EstimationError const&)
        {
            // Everything censored: the ARL is at least max_t.
            stats.mean = static_cast<double>(sim_.max_t);
            stats.se = 0;
            stats.reps_requested = stats.reps_used = stats.reps_censored = sim_.reps;
            stats.max_t = sim_.max_t;
        }
        ++evaluations_;
        return cache_.emplace(limit, stats).first->second;
    }

    double arl(double limit) { return at(limit).mean; }
    int evaluations() const noexcept { return evaluations_; }

  private:
    ChartSpec const& spec_;
    CountModel const& model_;
    SimOptions const& sim_;
    std::map<double, RunLengthStats> cache_;
    int evaluations_ = 0;
};

}  // namespace

CalibrationResult find_limit(ChartSpec const& spec_template,
                             CountModel const& model0,
                             CalibrationOptions const& opts)
{
    if (spec_template.kind() == ChartKind::CChart)
    {
        throw SpecError("c-chart thresholds are designed analytically, see c_chart_design");
    }
    if (!(opts.target_arl > 1))
    {
        throw ParameterError("target ARL must exceed 1");
    }
    double const target = opts.target_arl;
    ArlOracle oracle{spec_template, model0, opts.sim};

    double lo = 0;
    double hi = 0;
    if (opts.bracket)
    {
        std::tie(lo, hi) = *opts.bracket;
        if (!(lo >= 0) || !(hi > lo))
        {
            throw BracketError("bracket must satisfy 0 <= lo < hi");
        }
        if (!(oracle.arl(lo) < target) || !(oracle.arl(hi) >= target))
        {
            throw BracketError("bracket [" + std::to_string(lo) + ", " + std::to_string(hi)
                               + "] gives ARLs " + std::to_string(oracle.arl(lo)) + " and "
                               + std::to_string(oracle.arl(hi))
                               + ", which do not enclose the target");
        }
    }
    else
    {
        // Grow from a small multiple of the statistic's spread; short runs
        // at small L are cheap, and the first overshoot is at most 1.5x.
        hi = 0.5 * spread_scale(spec_template);
        int steps = 0;
        if (oracle.arl(hi) >= target)
        {
            lo = hi;
            while (oracle.arl(lo) >= target)
            {
                hi = lo;
                lo /= kGrowth;
                if (++steps > kMaxBracketSteps)
                {
                    lo = 0;
                    if (oracle.arl(lo) >= target)
                        throw BracketError("target ARL is reached even at L = 0");
                    break;
                }
            }
        }
        else
        {
            while (oracle.arl(hi) < target)
            {
                lo = hi;
                hi *= kGrowth;
                if (++steps > kMaxBracketSteps)
                    throw BracketError("no half-width reaches the target ARL");
            }
        }
    }

    int iterations = 0;
    while (oracle.arl(hi) - oracle.arl(lo) > opts.rel_tol * target
           && hi - lo >= opts.min_width)
    {
        if (++iterations > opts.max_iterations)
        {
            double const best = std::fabs(oracle.arl(lo) - target)
                                        < std::fabs(oracle.arl(hi) - target)
                                    ? lo
                                    : hi;
            throw CalibrationError("bisection did not converge", best, oracle.arl(best));
        }
        double const mid = 0.5 * (lo + hi);
        if (oracle.arl(mid) < target)
            lo = mid;
        else
            hi = mid;
    }

    CalibrationResult result;
    result.limit = 0.5 * (lo + hi);
    result.achieved = oracle.at(result.limit);
    result.bracket_lo = lo;
    result.bracket_hi = hi;
    result.evaluations = oracle.evaluations();
    return result;
}

double c_chart_arl(double mu0, count_t threshold)
{
    if (!(mu0 > 0))
    {
        throw ParameterError("in-control mean must be positive");
    }
    double const p = poisson_upper_tail(mu0, threshold);
    return p > 0 ? 1.0 / p : std::numeric_limits<double>::infinity();
}

CChartDesign c_chart_design(double mu0, double target_arl)
{
    if (!(mu0 > 0))
    {
        throw ParameterError("in-control mean must be positive");
    }
    CChartDesign d;
    count_t k = 0;
    while (c_chart_arl(mu0, k) < target_arl)
        ++k;
    d.above_threshold = k;
    d.above_arl = c_chart_arl(mu0, k);
    if (k == 0)
    {
        d.below_threshold = 0;
        d.below_arl = d.above_arl;
    }
    else
    {
        d.below_threshold = k - 1;
        d.below_arl = c_chart_arl(mu0, k - 1);
    }
    bool const below_closer
        = k > 0 && std::fabs(d.below_arl - target_arl) < std::fabs(d.above_arl - target_arl);
    d.threshold = below_closer ? d.below_threshold : d.above_threshold;
    d.achieved_arl = below_closer ? d.below_arl : d.above_arl;
    return d;
}

}  // namespace steinspc
