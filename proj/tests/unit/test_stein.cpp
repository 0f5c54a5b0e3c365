#include "steinspc/stein.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "steinspc/errors.hpp"

namespace steinspc {
namespace {

std::vector<WeightFunction> builtin_weights()
{
    return {WeightFunction::constant_one(), WeightFunction::abs_linear(),
            WeightFunction::abs_root(), WeightFunction::log()};
}

// Long-double summation of both moments up to a fixed index, with the
// weight written out directly.
struct LdMoments
{
    long double m10;
    long double m01;
};

LdMoments oracle_moments(WeightKind kind, long double mu, int upto)
{
    auto f = [kind](long double x) -> long double {
        switch (kind)
        {
            case WeightKind::ConstantOne: return 1.0L;
            case WeightKind::AbsLinear: return std::fabs(x - 1.0L);
            case WeightKind::AbsRoot: return std::pow(std::fabs(x - 1.0L), 0.25L);
            case WeightKind::Log: return x > 0 ? std::log(x) : 0.0L;
            default: return 0.0L;
        }
    };
    long double p = std::exp(-mu);
    LdMoments out{0, 0};
    for (int x = 0; x <= upto; ++x)
    {
        out.m10 += x * f(x) * p;
        out.m01 += f(x + 1.0L) * p;
        p *= mu / (x + 1);
    }
    return out;
}

TEST(Weights, Products)
{
    auto const lg = WeightFunction::log();
    EXPECT_EQ(lg.xf(0), 0.0);
    EXPECT_EQ(lg.xf(1), 0.0);
    EXPECT_EQ(lg.f_shift(0), 0.0);
    EXPECT_NEAR(lg.xf(3), 3 * std::log(3.0), 1e-15);

    auto const lin = WeightFunction::abs_linear();
    EXPECT_EQ(lin.xf(3), 6.0);
    EXPECT_EQ(lin.f_shift(0), 0.0);
    EXPECT_EQ(lin.xf(0), 0.0);

    auto const root = WeightFunction::abs_root();
    EXPECT_NEAR(root.f_shift(4), std::sqrt(2.0), 1e-15);
    EXPECT_EQ(root.xf(1), 0.0);

    auto const one = WeightFunction::constant_one();
    EXPECT_EQ(one.xf(7), 7.0);
    EXPECT_EQ(one.f_shift(0), 1.0);
}

TEST(Weights, ParseNames)
{
    EXPECT_EQ(WeightFunction::parse("abslinear").kind(), WeightKind::AbsLinear);
    EXPECT_EQ(WeightFunction::parse("absroot").kind(), WeightKind::AbsRoot);
    EXPECT_EQ(WeightFunction::parse("log").kind(), WeightKind::Log);
    EXPECT_EQ(WeightFunction::parse("one").kind(), WeightKind::ConstantOne);
    EXPECT_THROW(WeightFunction::parse("cubic"), ParameterError);
}

TEST(Weights, TabulatedExtendsLastValue)
{
    auto const f = WeightFunction::tabulated({0.0, 1.0, 2.0, 4.0});
    EXPECT_EQ(f.xf(3), 12.0);
    EXPECT_EQ(f.f_shift(2), 4.0);
    EXPECT_EQ(f.f_shift(3), 4.0);
    EXPECT_EQ(f.xf(10), 40.0);
    EXPECT_EQ(f.f_shift(100), 4.0);
    ASSERT_NE(f.table(), nullptr);
    EXPECT_EQ(f.table()->size(), 4u);
}

TEST(Weights, TabulatedValidation)
{
    EXPECT_THROW(WeightFunction::tabulated({}), ParameterError);
    EXPECT_THROW(WeightFunction::tabulated({1.0, -1.0}), ParameterError);
    EXPECT_THROW(WeightFunction::tabulated({1.0, NAN}), ParameterError);
    EXPECT_THROW(WeightFunction::tabulated({1.0, 0.0, 0.0}), ParameterError);
}

TEST(Moments, ConstantAndLinearExamples)
{
    auto const one = stein_moments_poisson(WeightFunction::constant_one(), 2.0);
    EXPECT_EQ(one.m10, 2.0);
    EXPECT_EQ(one.m01, 1.0);
    EXPECT_EQ(one.truncation_m, 0);

    auto const lin = stein_moments_poisson(WeightFunction::abs_linear(), 2.0);
    EXPECT_NEAR(lin.m10, 4.0, 1e-10);
    EXPECT_NEAR(lin.m01, 2.0, 1e-10);
    EXPECT_GT(lin.truncation_m, 0);
}

TEST(Moments, LogMatchesHighPrecisionSum)
{
    auto const want = oracle_moments(WeightKind::Log, 2.0L, 200);
    auto const got = stein_moments_poisson(WeightFunction::log(), 2.0);
    EXPECT_NEAR(got.m10, static_cast<double>(want.m10), 1e-10);
    EXPECT_NEAR(got.m01, static_cast<double>(want.m01), 1e-10);
    EXPECT_NEAR(got.m10, 2.0 * got.m01, 1e-10);

    auto const tight = stein_moments_poisson(WeightFunction::log(), 2.0, {1e-15, std::nullopt});
    EXPECT_NEAR(tight.m10, static_cast<double>(want.m10), 1e-13);
    EXPECT_NEAR(tight.m01, static_cast<double>(want.m01), 1e-13);
}

TEST(Moments, AgreeWithOracleAcrossGrid)
{
    for (auto const& f : builtin_weights())
    {
        for (double mu : {0.5, 1.48, 2.0, 5.0, 10.0})
        {
            auto const want = oracle_moments(f.kind(), mu, 300);
            auto const got = stein_moments_poisson(f, mu);
            EXPECT_NEAR(got.m10, static_cast<double>(want.m10), 1e-10);
            EXPECT_NEAR(got.m01, static_cast<double>(want.m01), 1e-10);
            auto const tight = stein_moments_poisson(f, mu, {1e-15, std::nullopt});
            EXPECT_NEAR(tight.m10, static_cast<double>(want.m10), 1e-12 * std::max(1.0, tight.m10));
            EXPECT_NEAR(tight.m01, static_cast<double>(want.m01), 1e-12 * std::max(1.0, tight.m01));
        }
    }
}

TEST(Moments, SteinIdentity)
{
    for (auto const& f : builtin_weights())
    {
        for (double mu : {0.5, 1.48, 2.0, 5.0, 10.0})
        {
            auto const m = stein_moments_poisson(f, mu);
            EXPECT_LE(std::fabs(m.m10 - mu * m.m01), 1e-10 * std::max(1.0, m.m10))
                << f.name() << " mu=" << mu;
        }
    }
}

TEST(Moments, FixedTruncationAtFifty)
{
    auto const m = stein_moments_poisson(WeightFunction::log(), 2.0, Truncation::fixed(50));
    EXPECT_EQ(m.truncation_m, 50);
    auto const want = oracle_moments(WeightKind::Log, 2.0L, 50);
    EXPECT_NEAR(m.m10, static_cast<double>(want.m10), 1e-13);
    EXPECT_NEAR(m.m01, static_cast<double>(want.m01), 1e-13);

    auto const one = stein_moments_poisson(WeightFunction::constant_one(), 2.0,
                                           Truncation::fixed(50));
    EXPECT_EQ(one.truncation_m, 50);
    EXPECT_NEAR(one.m10, 2.0, 1e-14);
}

TEST(Moments, LargerTruncationChangesLittle)
{
    for (auto const& f : builtin_weights())
    {
        auto const tight = stein_moments_poisson(f, 5.0, {1e-14, std::nullopt});
        auto const loose = stein_moments_poisson(f, 5.0, {1e-8, std::nullopt});
        EXPECT_GE(tight.truncation_m, loose.truncation_m);
        EXPECT_NEAR(tight.m10, loose.m10, 1e-8 * std::max(1.0, tight.m10));
        EXPECT_NEAR(tight.m01, loose.m01, 1e-8 * std::max(1.0, tight.m01));
    }
}

TEST(Moments, Errors)
{
    EXPECT_THROW(stein_moments_poisson(WeightFunction::log(), 0.0), ParameterError);
    EXPECT_THROW(stein_moments_poisson(WeightFunction::log(), 2.0, {0.0, std::nullopt}),
                 ParameterError);
    EXPECT_THROW(stein_moments_poisson(WeightFunction::abs_linear(), 1e7), TruncationError);
}

TEST(Residual, PoissonIsZero)
{
    for (auto const& f : builtin_weights())
    {
        for (double mu : {0.5, 2.0, 10.0})
        {
            auto const r = stein_residual(f, CountModel::poisson(mu));
            EXPECT_LE(std::fabs(r), 1e-10 * std::max(1.0, mu * mu)) << f.name();
        }
    }
}

TEST(Residual, AbsLinearExamples)
{
    auto const lin = WeightFunction::abs_linear();
    EXPECT_NEAR(stein_residual(lin, CountModel::negbin(2, 5.0 / 3.0)), 4.0 / 3.0, 1e-8);
    EXPECT_NEAR(stein_residual(lin, CountModel::zip(2, 5.0 / 3.0)), 4.0 / 3.0, 1e-8);
}

TEST(Residual, AbsLinearEqualsExcessVariance)
{
    auto const lin = WeightFunction::abs_linear();
    for (double mu : {1.0, 2.0, 5.0})
    {
        for (double disp : {1.0, 5.0 / 3.0, 3.0})
        {
            for (Family fam : {Family::Poisson, Family::NegBin, Family::Zip})
            {
                if ((fam == Family::Poisson && disp != 1.0) || (fam == Family::NegBin && disp == 1.0))
                    continue;
                auto const model = CountModel::make(fam, mu, disp);
                EXPECT_NEAR(stein_residual(lin, model), (disp - 1) * mu, 1e-8)
                    << to_string(fam) << " " << mu << " " << disp;
            }
        }
    }
}

}  // namespace
}  // namespace steinspc
