#include "steinspc/stein.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "steinspc/errors.hpp"

namespace steinspc {

WeightFunction WeightFunction::tabulated(std::vector<double> values)
{
    if (values.empty())
    {
        throw ParameterError("tabulated weight needs at least one value");
    }
    for (double v : values)
    {
        if (!std::isfinite(v) || v < 0)
        {
            throw ParameterError("tabulated weight values must be finite and nonnegative");
        }
    }
    // f(x+1) for x >= 0 reads entries 1.. (or the last entry when size is 1).
    bool const positive = values.size() == 1
                              ? values.front() > 0
                              : std::any_of(values.begin() + 1, values.end(),
                                            [](double v) { return v > 0; });
    if (!positive)
    {
        throw ParameterError("tabulated weight must not vanish on the positive integers");
    }
    WeightFunction f{WeightKind::Tabulated};
    f.table_ = std::make_shared<std::vector<double> const>(std::move(values));
    return f;
}

WeightFunction WeightFunction::parse(std::string_view name)
{
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    if (s == "one" || s == "constant" || s == "1")
        return constant_one();
    if (s == "abslinear" || s == "linear" || s == "|x-1|")
        return abs_linear();
    if (s == "absroot" || s == "root" || s == "|x-1|^0.25")
        return abs_root();
    if (s == "log" || s == "ln")
        return log();
    throw ParameterError("unknown weight function '" + std::string(name) + "'");
}

std::string WeightFunction::name() const
{
    switch (kind_)
    {
        case WeightKind::ConstantOne:
            return "one";
        case WeightKind::AbsLinear:
            return "abslinear";
        case WeightKind::AbsRoot:
            return "absroot";
        case WeightKind::Log:
            return "log";
        case WeightKind::Tabulated:
            return "table";
    }
    return "?";
}

double WeightFunction::table_at(count_t x) const noexcept
{
    auto const& t = *table_;
    auto const i = static_cast<std::size_t>(x);
    return i < t.size() ? t[i] : t.back();
}

double WeightFunction::xf(count_t x) const noexcept
{
    double const xd = static_cast<double>(x);
    switch (kind_)
    {
        case WeightKind::ConstantOne:
            return xd;
        case WeightKind::AbsLinear:
            return xd * std::fabs(xd - 1.0);
        case WeightKind::AbsRoot:
            return xd * std::sqrt(std::sqrt(std::fabs(xd - 1.0)));
        case WeightKind::Log:
            // 0 * ln 0 = 0
            return x == 0 ? 0.0 : xd * std::log(xd);
        case WeightKind::Tabulated:
            return xd * table_at(x);
    }
    return 0.0;
}

double WeightFunction::f_shift(count_t x) const noexcept
{
    double const xd = static_cast<double>(x);
    switch (kind_)
    {
        case WeightKind::ConstantOne:
            return 1.0;
        case WeightKind::AbsLinear:
            return xd;
        case WeightKind::AbsRoot:
            return std::sqrt(std::sqrt(xd));
        case WeightKind::Log:
            return std::log1p(xd);
        case WeightKind::Tabulated:
            return table_at(x + 1);
    }
    return 0.0;
}

namespace {

struct WeightedSums
{
    double xf = 0;
    double f_shift = 0;
    count_t m = 0;
};

/*!
 * Sums x f(x) p(x) and f(x+1) p(x) over x = 0..M.
 *
 * Adaptive mode picks the smallest M for which the probability tail and
 * both weighted tails (the second scaled by `mu`) are below tail_tol, so
 * the truncated Stein identity holds to within tail_tol.
 */
WeightedSums weighted_sums(WeightFunction const& f,
                           CountModel const& model,
                           Truncation const& trunc)
{
    WeightedSums out;
    if (trunc.fixed_m)
    {
        auto const probs = model.pmf_table(trunc.tail_tol, trunc.fixed_m);
        for (std::size_t x = 0; x < probs.size(); ++x)
        {
            out.xf += f.xf(static_cast<count_t>(x)) * probs[x];
            out.f_shift += f.f_shift(static_cast<count_t>(x)) * probs[x];
        }
        out.m = *trunc.fixed_m;
        return out;
    }
    if (!(trunc.tail_tol > 0))
    {
        throw ParameterError("tail tolerance must be positive");
    }

    auto const probs = model.pmf_table(trunc.tail_tol * 1e-8);
    double const mu = model.mu();
    std::size_t m = probs.size() - 1;
    double tail_p = 0, tail_xf = 0, tail_fs = 0;
    while (m > 0)
    {
        auto const x = static_cast<count_t>(m);
        double const p = probs[m];
        double const next_xf = tail_xf + std::fabs(f.xf(x)) * p;
        double const next_fs = tail_fs + std::fabs(f.f_shift(x)) * p;
        if (tail_p + p >= trunc.tail_tol || next_xf >= trunc.tail_tol
            || mu * next_fs >= trunc.tail_tol)
        {
            break;
        }
        tail_p += p;
        tail_xf = next_xf;
        tail_fs = next_fs;
        --m;
    }
    if (tail_p >= trunc.tail_tol)
    {
        throw TruncationError("tail tolerance not reachable");
    }
    for (std::size_t x = 0; x <= m; ++x)
    {
        out.xf += f.xf(static_cast<count_t>(x)) * probs[x];
        out.f_shift += f.f_shift(static_cast<count_t>(x)) * probs[x];
    }
    out.m = static_cast<count_t>(m);
    return out;
}

}  // namespace

SteinMoments stein_moments_poisson(WeightFunction const& f, double mu0, Truncation const& trunc)
{
    auto const model = CountModel::poisson(mu0);
    if (f.kind() == WeightKind::ConstantOne && !trunc.fixed_m)
    {
        // E[X] and E[1] exactly, so f = 1 reproduces the ordinary EWMA.
        return {mu0, 1.0, mu0, 0};
    }
    auto const sums = weighted_sums(f, model, trunc);
    return {sums.xf, sums.f_shift, mu0, sums.m};
}

double stein_residual(WeightFunction const& f, CountModel const& model, Truncation const& trunc)
{
    auto const sums = weighted_sums(f, model, trunc);
    return sums.xf - model.mu() * sums.f_shift;
}

}  // namespace steinspc
