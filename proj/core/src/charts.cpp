#include "steinspc/charts.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "steinspc/errors.hpp"

namespace steinspc {

std::string_view to_string(ChartKind kind) noexcept
{
    switch (kind)
    {
        case ChartKind::CChart:
            return "c";
        case ChartKind::Ewma:
            return "ewma";
        case ChartKind::AbEwma:
            return "ab";
        case ChartKind::AbcEwma:
            return "abc";
    }
    return "?";
}

ChartKind parse_chart_kind(std::string_view name)
{
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    if (s == "c" || s == "cchart" || s == "c-chart")
        return ChartKind::CChart;
    if (s == "ewma")
        return ChartKind::Ewma;
    if (s == "ab" || s == "ab-ewma" || s == "abewma")
        return ChartKind::AbEwma;
    if (s == "abc" || s == "abc-ewma" || s == "abcewma")
        return ChartKind::AbcEwma;
    throw SpecError("unknown chart kind '" + std::string(name) + "'");
}

namespace {

void check_mu0(double mu0)
{
    if (!(mu0 > 0) || !std::isfinite(mu0))
    {
        throw SpecError("in-control mean must be positive, got " + std::to_string(mu0));
    }
}

void check_limit(double limit)
{
    if (!(limit >= 0) || !std::isfinite(limit))
    {
        throw SpecError("limit half-width must be finite and nonnegative");
    }
}

void check_lambda(double lambda, bool strict)
{
    if (!(lambda > 0) || !(lambda <= 1))
    {
        throw SpecError("smoothing parameter must lie in (0, 1]");
    }
    if (strict && lambda >= 1)
    {
        // At lambda = 1 the B statistic is f(x+1) alone and can be zero.
        throw SpecError("AB/ABC charts require smoothing parameter < 1");
    }
}

}  // namespace

ChartSpec ChartSpec::c_chart(double mu0, count_t threshold)
{
    check_mu0(mu0);
    if (threshold < 0)
    {
        throw SpecError("c-chart threshold must be nonnegative");
    }
    ChartSpec s;
    s.kind_ = ChartKind::CChart;
    s.lambda_ = 1;
    s.mu0_ = mu0;
    s.threshold_ = threshold;
    return s;
}

ChartSpec ChartSpec::ewma(double lambda, double mu0, double limit)
{
    check_lambda(lambda, false);
    check_mu0(mu0);
    check_limit(limit);
    ChartSpec s;
    s.kind_ = ChartKind::Ewma;
    s.lambda_ = lambda;
    s.mu0_ = mu0;
    s.limit_ = limit;
    return s;
}

ChartSpec ChartSpec::ab_ewma(double lambda,
                             double mu0,
                             WeightFunction weight,
                             double limit,
                             Truncation const& trunc)
{
    check_lambda(lambda, true);
    check_mu0(mu0);
    check_limit(limit);
    ChartSpec s;
    s.kind_ = ChartKind::AbEwma;
    s.lambda_ = lambda;
    s.mu0_ = mu0;
    s.weight_ = std::move(weight);
    s.limit_ = limit;
    s.moments_ = stein_moments_poisson(s.weight_, mu0, trunc);
    if (!(s.moments_.m01 > 0))
    {
        throw SpecError("weight gives E[f(X+1)] = 0 under the in-control model");
    }
    return s;
}

ChartSpec ChartSpec::abc_ewma(double lambda,
                              double mu0,
                              WeightFunction weight,
                              double limit,
                              Truncation const& trunc)
{
    ChartSpec s = ab_ewma(lambda, mu0, std::move(weight), limit, trunc);
    s.kind_ = ChartKind::AbcEwma;
    return s;
}

ChartSpec ChartSpec::make(ChartKind kind,
                          double lambda,
                          double mu0,
                          WeightFunction weight,
                          double limit,
                          Truncation const& trunc)
{
    switch (kind)
    {
        case ChartKind::CChart: {
            if (limit != std::floor(limit) || limit < 0)
            {
                throw SpecError("c-chart threshold must be a nonnegative integer");
            }
            return c_chart(mu0, static_cast<count_t>(limit));
        }
        case ChartKind::Ewma:
            return ewma(lambda, mu0, limit);
        case ChartKind::AbEwma:
            return ab_ewma(lambda, mu0, std::move(weight), limit, trunc);
        case ChartKind::AbcEwma:
            return abc_ewma(lambda, mu0, std::move(weight), limit, trunc);
    }
    throw SpecError("unknown chart kind");
}

ChartSpec ChartSpec::with_limit(double limit) const
{
    check_limit(limit);
    ChartSpec s = *this;
    if (kind_ == ChartKind::CChart)
    {
        if (limit != std::floor(limit))
        {
            throw SpecError("c-chart threshold must be an integer");
        }
        s.threshold_ = static_cast<count_t>(limit);
    }
    else
    {
        s.limit_ = limit;
    }
    return s;
}

double ChartSpec::center() const noexcept
{
    return kind_ == ChartKind::AbcEwma ? 1.0 : mu0_;
}

Limits ChartSpec::limits() const noexcept
{
    if (kind_ == ChartKind::CChart)
    {
        return {-std::numeric_limits<double>::infinity(), static_cast<double>(threshold_)};
    }
    double const c = center();
    return {c - limit_, c + limit_};
}

ChartState init(ChartSpec const& spec)
{
    ChartState s;
    switch (spec.kind())
    {
        case ChartKind::CChart:
            s.stat = spec.mu0();
            break;
        case ChartKind::Ewma:
            s.z = spec.mu0();
            s.stat = spec.mu0();
            break;
        case ChartKind::AbEwma:
            s.a = spec.moments().m10;
            s.b = spec.moments().m01;
            s.stat = spec.mu0();
            break;
        case ChartKind::AbcEwma:
            s.a = spec.moments().m10;
            s.b = spec.moments().m01;
            s.c = spec.mu0();
            s.stat = 1.0;
            break;
    }
    return s;
}

Signal check(ChartSpec const& spec, double stat) noexcept
{
    if (spec.kind() == ChartKind::CChart)
    {
        return stat >= static_cast<double>(spec.c_threshold()) ? Signal::Alarm
                                                               : Signal::InControl;
    }
    auto const [lcl, ucl] = spec.limits();
    return (stat < lcl || stat > ucl) ? Signal::Alarm : Signal::InControl;
}

ChartState update(ChartState const& state, ChartSpec const& spec, count_t x) noexcept
{
    ChartState next = state;
    ++next.t;
    double const lambda = spec.lambda();
    double const keep = 1.0 - lambda;
    double const xd = static_cast<double>(x);
    switch (spec.kind())
    {
        case ChartKind::CChart:
            next.stat = xd;
            break;
        case ChartKind::Ewma:
            next.z = lambda * xd + keep * state.z;
            next.stat = next.z;
            break;
        case ChartKind::AbEwma:
            next.a = lambda * spec.weight().xf(x) + keep * state.a;
            next.b = lambda * spec.weight().f_shift(x) + keep * state.b;
            next.stat = next.a / next.b;
            break;
        case ChartKind::AbcEwma:
            next.a = lambda * spec.weight().xf(x) + keep * state.a;
            next.b = lambda * spec.weight().f_shift(x) + keep * state.b;
            next.c = lambda * xd + keep * state.c;
            next.stat = next.a / (next.b * next.c);
            break;
    }
    if (check(spec, next.stat) == Signal::Alarm)
    {
        next.alarmed = true;
    }
    return next;
}

MonitorResult monitor_series(ChartSpec const& spec, std::span<count_t const> series)
{
    MonitorResult result;
    result.trajectory.reserve(series.size());
    result.alarms.reserve(series.size());
    ChartState state = init(spec);
    for (std::size_t i = 0; i < series.size(); ++i)
    {
        if (series[i] < 0)
        {
            throw InputError("negative count at position " + std::to_string(i + 1));
        }
        state = update(state, spec, series[i]);
        bool const alarm = check(spec, state.stat) == Signal::Alarm;
        result.trajectory.push_back(state.stat);
        result.alarms.push_back(alarm);
        if (alarm && !result.first_alarm)
        {
            result.first_alarm = i + 1;
        }
    }
    return result;
}

}  // namespace steinspc
