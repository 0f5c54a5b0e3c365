#include "steinspc/calibrate.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "steinspc/designs.hpp"
#include "steinspc/errors.hpp"

namespace steinspc {
namespace {

// 1 / P(Poisson(mu) >= k) from a direct complement sum in long double.
double oracle_c_arl(double mu, count_t k)
{
    long double p = std::exp(-static_cast<long double>(mu));
    long double below = 0;
    for (count_t x = 0; x < k; ++x)
    {
        below += p;
        p *= mu / static_cast<long double>(x + 1);
    }
    return static_cast<double>(1.0L / (1.0L - below));
}

CalibrationOptions calib_options(std::uint64_t reps, std::uint64_t seed)
{
    CalibrationOptions o;
    o.sim.reps = reps;
    o.sim.seed = seed;
    o.sim.workers = 0;
    return o;
}

TEST(CChart, ParticleExample)
{
    auto const d = c_chart_design(1.48, 370);
    EXPECT_EQ(d.threshold, 6);
    EXPECT_NEAR(d.achieved_arl, 239.2, 0.05);
    EXPECT_EQ(d.below_threshold, 6);
    EXPECT_EQ(d.above_threshold, 7);
    EXPECT_GT(d.above_arl, 370);
    EXPECT_NEAR(d.achieved_arl, oracle_c_arl(1.48, 6), 1e-9 * d.achieved_arl);
}

TEST(CChart, ThresholdOne)
{
    EXPECT_NEAR(c_chart_arl(1.48, 1), 1.0 / (1.0 - std::exp(-1.48)), 1e-13);
    EXPECT_EQ(c_chart_arl(1.48, 0), 1.0);
}

TEST(CChart, MeanTwoAgainstTailSum)
{
    auto const d = c_chart_design(2.0, 370);
    count_t k = 0;
    while (oracle_c_arl(2.0, k) < 370)
        ++k;
    double const above = oracle_c_arl(2.0, k);
    double const below = oracle_c_arl(2.0, k - 1);
    count_t const want = std::fabs(below - 370) < std::fabs(above - 370) ? k - 1 : k;
    EXPECT_EQ(d.threshold, want);
    EXPECT_NEAR(d.achieved_arl, oracle_c_arl(2.0, want), 1e-9 * d.achieved_arl);
    EXPECT_NEAR(d.above_arl, above, 1e-9 * above);
    EXPECT_NEAR(d.below_arl, below, 1e-9 * below);
    for (count_t j = 0; j < 15; ++j)
        EXPECT_NEAR(c_chart_arl(2.0, j), oracle_c_arl(2.0, j), 1e-10 * oracle_c_arl(2.0, j));
}

TEST(CChart, Errors)
{
    EXPECT_THROW(c_chart_design(0.0), ParameterError);
    EXPECT_THROW(find_limit(ChartSpec::c_chart(2.0, 6), CountModel::poisson(2.0), {}), SpecError);
}

TEST(FindLimit, EwmaMeanTwo)
{
    auto const r = find_limit(ChartSpec::ewma(0.1, 2.0, 0.0), CountModel::poisson(2.0),
                              calib_options(10000, 1));
    EXPECT_GE(r.limit, 0.857);
    EXPECT_LE(r.limit, 0.897);
    EXPECT_NEAR(r.achieved.mean, 370.0, 0.04 * 370.0);
    EXPECT_LE(r.bracket_lo, r.limit);
    EXPECT_GE(r.bracket_hi, r.limit);
    EXPECT_GT(r.evaluations, 2);
}

TEST(FindLimit, ParticleEwma)
{
    auto const r = find_limit(ChartSpec::ewma(0.1, 1.48, 0.0), CountModel::poisson(1.48),
                              calib_options(10000, 1));
    EXPECT_NEAR(r.limit, 0.758, 0.02);
}

TEST(FindLimit, ReproducibleForSeed)
{
    auto const tmpl = ChartSpec::ab_ewma(0.1, 2.0, WeightFunction::abs_root(), 0.0);
    auto const opts = calib_options(1000, 42);
    auto const a = find_limit(tmpl, CountModel::poisson(2.0), opts);
    auto const b = find_limit(tmpl, CountModel::poisson(2.0), opts);
    EXPECT_EQ(a.limit, b.limit);
    EXPECT_EQ(a.achieved.mean, b.achieved.mean);
    EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(FindLimit, SeedChangeWithinMonteCarloError)
{
    auto const tmpl = ChartSpec::ewma(0.1, 2.0, 0.0);
    auto const model = CountModel::poisson(2.0);
    auto const a = find_limit(tmpl, model, calib_options(4000, 1));
    auto const b = find_limit(tmpl, model, calib_options(4000, 2));

    // Translate the ARL standard error into L units through the local slope.
    SimOptions sim;
    sim.reps = 4000;
    sim.seed = 3;
    double const h = 0.03;
    double const up = zero_state_arl(tmpl.with_limit(a.limit + h), model, sim).mean;
    double const down = zero_state_arl(tmpl.with_limit(a.limit - h), model, sim).mean;
    double const slope = (up - down) / (2 * h);
    ASSERT_GT(slope, 0);
    double const se_l = std::hypot(a.achieved.se, b.achieved.se) / slope;
    double const resolution = (a.bracket_hi - a.bracket_lo) + (b.bracket_hi - b.bracket_lo);
    EXPECT_LT(std::fabs(a.limit - b.limit), 3 * se_l + resolution);
}

TEST(FindLimit, ExplicitBracket)
{
    auto opts = calib_options(1000, 5);
    opts.bracket = std::pair{0.5, 1.5};
    auto const r = find_limit(ChartSpec::ewma(0.1, 2.0, 0.0), CountModel::poisson(2.0), opts);
    EXPECT_GT(r.limit, 0.5);
    EXPECT_LT(r.limit, 1.5);

    opts.bracket = std::pair{0.0, 0.1};
    EXPECT_THROW(find_limit(ChartSpec::ewma(0.1, 2.0, 0.0), CountModel::poisson(2.0), opts),
                 BracketError);
    opts.bracket = std::pair{1.0, 0.5};
    EXPECT_THROW(find_limit(ChartSpec::ewma(0.1, 2.0, 0.0), CountModel::poisson(2.0), opts),
                 BracketError);
}

TEST(FindLimit, IterationCapReportsBestIterate)
{
    auto opts = calib_options(500, 5);
    opts.rel_tol = 1e-9;
    opts.min_width = 1e-12;
    opts.max_iterations = 3;
    try
    {
        find_limit(ChartSpec::ewma(0.1, 2.0, 0.0), CountModel::poisson(2.0), opts);
        FAIL() << "expected CalibrationError";
    }
    catch (CalibrationError const& e)
    {
        EXPECT_GT(e.best_limit(), 0.0);
        EXPECT_GT(e.best_arl(), 1.0);
    }
}

TEST(FindLimit, MonotoneStepFunction)
{
    auto const tmpl = ChartSpec::abc_ewma(0.1, 2.0, WeightFunction::log(), 0.0);
    SimOptions sim;
    sim.reps = 500;
    sim.seed = 9;
    double prev = 0;
    for (double L : {0.1, 0.2, 0.3, 0.35, 0.4, 0.45, 0.5})
    {
        double const arl = zero_state_arl(tmpl.with_limit(L), CountModel::poisson(2.0), sim).mean;
        EXPECT_GE(arl, prev) << L;
        prev = arl;
    }
}

TEST(PublishedDesigns, ParticleInControlArl)
{
    SimOptions sim;
    sim.reps = 10000;
    sim.seed = 1;
    for (auto const& d : particle_designs())
    {
        auto const s = zero_state_arl(d.spec(), CountModel::poisson(d.mu0), sim);
        EXPECT_GE(s.mean, 355.0) << to_string(d.kind) << " L=" << d.limit;
        EXPECT_LE(s.mean, 385.0) << to_string(d.kind) << " L=" << d.limit;
    }
}

}  // namespace
}  // namespace steinspc
