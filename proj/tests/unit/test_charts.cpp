#include "steinspc/charts.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "steinspc/errors.hpp"

namespace steinspc {
namespace {

std::vector<count_t> random_series(CountModel const& model, std::uint64_t seed, std::size_t n)
{
    Xoshiro256 rng{seed};
    CountSampler sampler{model};
    std::vector<count_t> out(n);
    for (auto& x : out)
        x = sampler(rng);
    return out;
}

TEST(ChartInit, StartingValues)
{
    auto const ab = ChartSpec::ab_ewma(0.1, 2.0, WeightFunction::abs_linear(), 1.191);
    auto const s = init(ab);
    EXPECT_NEAR(s.a, 4.0, 1e-10);
    EXPECT_NEAR(s.b, 2.0, 1e-10);
    EXPECT_NEAR(s.stat, 2.0, 1e-10);
    EXPECT_EQ(s.t, 0);
    EXPECT_FALSE(s.alarmed);

    for (auto const& f : {WeightFunction::abs_linear(), WeightFunction::abs_root(),
                          WeightFunction::log()})
    {
        auto const abc = ChartSpec::abc_ewma(0.1, 5.0, f, 0.1);
        EXPECT_EQ(init(abc).stat, 1.0);
        EXPECT_EQ(abc.center(), 1.0);
    }

    auto const e = ChartSpec::ewma(0.1, 5.0, 1.388);
    EXPECT_EQ(init(e).stat, 5.0);
    EXPECT_EQ(init(e).z, 5.0);
}

TEST(ChartUpdate, Recursions)
{
    auto const e = ChartSpec::ewma(0.1, 2.0, 0.877);
    auto const s1 = update(init(e), e, 5);
    EXPECT_NEAR(s1.stat, 2.3, 1e-15);
    EXPECT_EQ(s1.t, 1);

    auto const ab = ChartSpec::ab_ewma(0.1, 2.0, WeightFunction::abs_linear(), 1.191);
    ChartState st = init(ab);
    st.a = 4;
    st.b = 2;
    auto const s2 = update(st, ab, 0);
    EXPECT_NEAR(s2.a, 3.6, 1e-15);
    EXPECT_NEAR(s2.b, 1.8, 1e-15);
    EXPECT_NEAR(s2.stat, 2.0, 1e-15);

    auto const abc = ChartSpec::abc_ewma(0.1, 2.0, WeightFunction::abs_linear(), 0.463);
    ChartState sc = init(abc);
    sc.a = 4;
    sc.b = 2;
    sc.c = 2;
    auto const s3 = update(sc, abc, 0);
    EXPECT_NEAR(s3.a, 3.6, 1e-15);
    EXPECT_NEAR(s3.b, 1.8, 1e-15);
    EXPECT_NEAR(s3.c, 1.8, 1e-15);
    EXPECT_NEAR(s3.stat, 3.6 / (1.8 * 1.8), 1e-15);

    auto const c = ChartSpec::c_chart(1.48, 6);
    auto const s4 = update(init(c), c, 4);
    EXPECT_EQ(s4.stat, 4.0);
    EXPECT_FALSE(s4.alarmed);
}

TEST(ChartCheck, StrictLimits)
{
    auto const e = ChartSpec::ewma(0.1, 2.0, 0.877);
    EXPECT_EQ(check(e, 2.9), Signal::Alarm);
    EXPECT_EQ(check(e, 1.1), Signal::Alarm);
    EXPECT_EQ(check(e, 2.0), Signal::InControl);
    EXPECT_EQ(check(e, e.limits().ucl), Signal::InControl);
    EXPECT_EQ(check(e, e.limits().lcl), Signal::InControl);

    auto const abc = ChartSpec::abc_ewma(0.1, 2.0, WeightFunction::abs_linear(), 0.463);
    EXPECT_EQ(check(abc, 1.0), Signal::InControl);
    EXPECT_EQ(check(abc, 1.5), Signal::Alarm);

    auto const c = ChartSpec::c_chart(1.48, 6);
    EXPECT_EQ(check(c, 6), Signal::Alarm);
    EXPECT_EQ(check(c, 5), Signal::InControl);
    EXPECT_EQ(check(c, 0), Signal::InControl);
}

TEST(ChartSpecErrors, Validation)
{
    EXPECT_THROW(ChartSpec::ab_ewma(1.0, 2.0, WeightFunction::abs_linear(), 1.0), SpecError);
    EXPECT_THROW(ChartSpec::abc_ewma(1.0, 2.0, WeightFunction::abs_linear(), 1.0), SpecError);
    EXPECT_THROW(ChartSpec::ewma(0.0, 2.0, 1.0), SpecError);
    EXPECT_THROW(ChartSpec::ewma(1.5, 2.0, 1.0), SpecError);
    EXPECT_THROW(ChartSpec::ewma(0.1, 0.0, 1.0), SpecError);
    EXPECT_THROW(ChartSpec::ewma(0.1, 2.0, -0.1), SpecError);
    EXPECT_NO_THROW(ChartSpec::ewma(1.0, 2.0, 1.0));
    std::vector<double> far_table(200, 0.0);
    far_table.push_back(1.0);
    EXPECT_THROW(ChartSpec::ab_ewma(0.1, 0.5, WeightFunction::tabulated(far_table), 1.0),
                 SpecError);
    EXPECT_EQ(parse_chart_kind("abc"), ChartKind::AbcEwma);
    EXPECT_EQ(parse_chart_kind("c"), ChartKind::CChart);
    EXPECT_THROW(parse_chart_kind("cusum"), SpecError);
}

TEST(ChartSpecErrors, WithLimitReusesMoments)
{
    auto const ab = ChartSpec::ab_ewma(0.1, 2.0, WeightFunction::log(), 1.0);
    auto const other = ab.with_limit(0.5);
    EXPECT_EQ(other.limit(), 0.5);
    EXPECT_EQ(other.moments().m10, ab.moments().m10);
    EXPECT_EQ(other.moments().m01, ab.moments().m01);
    EXPECT_THROW(ab.with_limit(-1.0), SpecError);
}

TEST(Monitor, Examples)
{
    auto const c = ChartSpec::c_chart(1.48, 6);
    std::vector<count_t> const xs{1, 0, 7, 2};
    auto const r = monitor_series(c, xs);
    ASSERT_TRUE(r.first_alarm);
    EXPECT_EQ(*r.first_alarm, 3u);
    EXPECT_EQ(r.trajectory, (std::vector<double>{1, 0, 7, 2}));
    EXPECT_EQ(r.alarms, (std::vector<bool>{false, false, true, false}));

    auto const e = ChartSpec::ewma(0.1, 2.0, 0.877);
    std::vector<count_t> const twos(50, 2);
    auto const flat = monitor_series(e, twos);
    EXPECT_FALSE(flat.first_alarm);
    for (double z : flat.trajectory)
        EXPECT_EQ(z, 2.0);

    auto const zero = ChartSpec::ewma(0.1, 2.0, 0.0);
    for (count_t x0 : {0, 1, 3, 9})
    {
        std::vector<count_t> const s{x0, 2, 2};
        auto const r0 = monitor_series(zero, s);
        ASSERT_TRUE(r0.first_alarm);
        EXPECT_EQ(*r0.first_alarm, 1u);
    }
}

TEST(Monitor, ContinuesPastAlarms)
{
    auto const e = ChartSpec::ewma(0.5, 2.0, 0.5);
    std::vector<count_t> const xs{10, 2, 2, 2, 2, 2, 2, 2};
    auto const r = monitor_series(e, xs);
    EXPECT_EQ(r.trajectory.size(), xs.size());
    EXPECT_TRUE(r.alarms.front());
    EXPECT_FALSE(r.alarms.back());
}

TEST(ChartProperties, AbWithConstantWeightIsEwma)
{
    auto const e = ChartSpec::ewma(0.1, 2.0, 0.877);
    auto const ab = ChartSpec::ab_ewma(0.1, 2.0, WeightFunction::constant_one(), 0.877);
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        auto const xs = random_series(CountModel::negbin(2.0, 2.0), seed, 1000);
        auto const re = monitor_series(e, xs);
        auto const ra = monitor_series(ab, xs);
        for (std::size_t t = 0; t < xs.size(); ++t)
            ASSERT_NEAR(re.trajectory[t], ra.trajectory[t], 1e-12) << seed << " " << t;
    }
}

TEST(ChartProperties, DenominatorStaysPositive)
{
    for (auto const& f : {WeightFunction::abs_linear(), WeightFunction::abs_root(),
                          WeightFunction::log(), WeightFunction::constant_one()})
    {
        auto const abc = ChartSpec::abc_ewma(0.1, 2.0, f, 0.5);
        auto const xs = random_series(CountModel::zip(2.0, 3.0), 77, 1'000'000);
        ChartState s = init(abc);
        for (count_t x : xs)
        {
            s = update(s, abc, x);
            ASSERT_GT(s.b, 0.0) << f.name() << " t=" << s.t;
            ASSERT_TRUE(std::isfinite(s.stat));
        }
    }
}

TEST(ChartProperties, EwmaIsConvexCombination)
{
    auto const e = ChartSpec::ewma(0.1, 2.0, 0.877);
    for (std::uint64_t seed = 0; seed < 50; ++seed)
    {
        auto const xs = random_series(CountModel::negbin(2.0, 3.0), 1000 + seed, 500);
        double const lo = std::min(2.0, static_cast<double>(*std::min_element(xs.begin(), xs.end())));
        double const hi = std::max(2.0, static_cast<double>(*std::max_element(xs.begin(), xs.end())));
        for (double z : monitor_series(e, xs).trajectory)
        {
            ASSERT_GE(z, lo);
            ASSERT_LE(z, hi);
        }
    }
}

TEST(ChartProperties, FirstAlarmNondecreasingInLimit)
{
    auto const abc = ChartSpec::abc_ewma(0.1, 2.0, WeightFunction::log(), 0.5);
    for (std::uint64_t seed = 0; seed < 50; ++seed)
    {
        auto const xs = random_series(CountModel::zip(2.0, 5.0 / 3.0), 500 + seed, 2000);
        std::size_t prev = 0;
        for (double L : {0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 1.0})
        {
            auto const r = monitor_series(abc.with_limit(L), xs);
            std::size_t const first = r.first_alarm.value_or(xs.size() + 1);
            ASSERT_GE(first, prev) << seed << " L=" << L;
            prev = first;
        }
    }
}

}  // namespace
}  // namespace steinspc
