#include "steinspc/dist.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "steinspc/errors.hpp"

namespace steinspc {
namespace {

constexpr count_t kTableHardCap = 2'000'000;

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

void check_mean(double mu)
{
    if (!(mu > 0) || !std::isfinite(mu))
    {
        throw ParameterError("mean must be positive and finite, got " + std::to_string(mu));
    }
}

}  // namespace

std::string_view to_string(Family family) noexcept
{
    switch (family)
    {
        case Family::Poisson:
            return "poisson";
        case Family::NegBin:
            return "negbin";
        case Family::Zip:
            return "zip";
    }
    return "?";
}

Family parse_family(std::string_view name)
{
    auto const s = lower(name);
    if (s == "poisson" || s == "poi")
        return Family::Poisson;
    if (s == "negbin" || s == "nb")
        return Family::NegBin;
    if (s == "zip")
        return Family::Zip;
    throw ParameterError("unknown count family '" + std::string(name) + "'");
}

NbParams nb_params(double mu, double disp)
{
    check_mean(mu);
    if (!(disp > 1) || !std::isfinite(disp))
    {
        throw ParameterError("negative binomial requires dispersion index > 1");
    }
    return {mu / (disp - 1.0), 1.0 / disp};
}

ZipParams zip_params(double mu, double disp)
{
    check_mean(mu);
    if (!(disp >= 1) || !std::isfinite(disp))
    {
        throw ParameterError("zero-inflated Poisson requires dispersion index >= 1");
    }
    double const lambda = mu + (disp - 1.0);
    return {(disp - 1.0) / lambda, lambda};
}

CountModel::CountModel(Family family, double mu, double disp)
    : family_(family), mu_(mu), disp_(disp)
{
    switch (family)
    {
        case Family::Poisson:
            check_mean(mu);
            if (disp != 1.0)
            {
                throw ParameterError("Poisson model requires dispersion index 1");
            }
            break;
        case Family::NegBin:
            nb_ = nb_params(mu, disp);
            break;
        case Family::Zip:
            zip_ = zip_params(mu, disp);
            break;
    }
}

CountModel CountModel::poisson(double mu)
{
    return CountModel{Family::Poisson, mu, 1.0};
}

CountModel CountModel::negbin(double mu, double disp)
{
    return CountModel{Family::NegBin, mu, disp};
}

CountModel CountModel::zip(double mu, double disp)
{
    return CountModel{Family::Zip, mu, disp};
}

CountModel CountModel::make(Family family, double mu, double disp)
{
    return CountModel{family, mu, disp};
}

double CountModel::pmf(count_t x) const
{
    if (x < 0)
        return 0.0;
    double const xd = static_cast<double>(x);
    switch (family_)
    {
        case Family::Poisson:
            return std::exp(xd * std::log(mu_) - mu_ - std::lgamma(xd + 1.0));
        case Family::NegBin: {
            auto const [n, p] = nb_;
            return std::exp(std::lgamma(n + xd) - std::lgamma(n) - std::lgamma(xd + 1.0)
                            + n * std::log(p) + xd * std::log1p(-p));
        }
        case Family::Zip: {
            auto const [omega, lambda] = zip_;
            double const poi
                = std::exp(xd * std::log(lambda) - lambda - std::lgamma(xd + 1.0));
            return (x == 0 ? omega : 0.0) + (1.0 - omega) * poi;
        }
    }
    return 0.0;
}

Moments CountModel::moments() const noexcept
{
    switch (family_)
    {
        case Family::Poisson:
            return {mu_, mu_};
        case Family::NegBin: {
            auto const [n, p] = nb_;
            double const q = 1.0 - p;
            return {n * q / p, n * q / (p * p)};
        }
        case Family::Zip: {
            auto const [omega, lambda] = zip_;
            double const mean = (1.0 - omega) * lambda;
            return {mean, mean * (1.0 + omega * lambda)};
        }
    }
    return {0, 0};
}

std::vector<double> CountModel::pmf_table(double tail_tol, std::optional<count_t> fixed_m) const
{
    if (fixed_m && *fixed_m < 0)
    {
        throw ParameterError("truncation index must be nonnegative");
    }
    if (!fixed_m && !(tail_tol > 0))
    {
        throw ParameterError("tail tolerance must be positive");
    }

    // Log-space recursion p(x+1) = p(x) * ratio(x) from the closed-form p(0).
    double log_p0 = 0;
    double scale = 1.0;
    double zero_mass = 0.0;
    double base_mean = mu_;
    auto log_ratio = [&](count_t x) {
        double const xd = static_cast<double>(x);
        if (family_ == Family::NegBin)
            return std::log((nb_.n + xd) / (xd + 1.0)) + std::log1p(-nb_.p);
        return std::log(base_mean / (xd + 1.0));
    };
    switch (family_)
    {
        case Family::Poisson:
            log_p0 = -mu_;
            break;
        case Family::NegBin:
            log_p0 = nb_.n * std::log(nb_.p);
            break;
        case Family::Zip:
            base_mean = zip_.lambda;
            log_p0 = -zip_.lambda;
            scale = 1.0 - zip_.omega;
            zero_mass = zip_.omega;
            break;
    }
    double const mean = moments().mean;

    std::vector<double> probs;
    double log_p = log_p0;
    for (count_t x = 0;; ++x)
    {
        probs.push_back(scale * std::exp(log_p));
        if (fixed_m)
        {
            if (x == *fixed_m)
                break;
        }
        else if (static_cast<double>(x) > mean)
        {
            // Past the mode the ratio is decreasing, so the geometric bound
            // term * r / (1 - r) dominates the remaining mass.
            double const r = std::exp(log_ratio(x));
            if (r < 1.0 && probs.back() * r / (1.0 - r) < tail_tol * 1e-3)
                break;
        }
        if (x >= kTableHardCap)
        {
            throw TruncationError("PMF table exceeded hard cap of "
                                  + std::to_string(kTableHardCap) + " terms");
        }
        log_p += log_ratio(x);
    }
    probs[0] += zero_mass;
    if (fixed_m)
        return probs;

    // Smallest M with P(X > M) < tail_tol, summing the tail from the far end.
    double tail = 0.0;
    std::size_t m = probs.size() - 1;
    while (m > 0 && tail + probs[m] < tail_tol)
    {
        tail += probs[m];
        --m;
    }
    probs.resize(m + 1);
    return probs;
}

CountSampler::CountSampler(CountModel const& model) : model_(model)
{
    switch (model.family())
    {
        case Family::Poisson:
            poisson_ = std::poisson_distribution<count_t>(model.mu());
            break;
        case Family::NegBin: {
            auto const [n, p] = model.nb();
            gamma_ = std::gamma_distribution<double>(n, (1.0 - p) / p);
            break;
        }
        case Family::Zip:
            poisson_ = std::poisson_distribution<count_t>(model.zip().lambda);
            break;
    }
}

count_t CountSampler::operator()(Xoshiro256& rng)
{
    switch (model_.family())
    {
        case Family::Poisson:
            return poisson_(rng);
        case Family::NegBin: {
            // Gamma-Poisson mixture.
            double const rate = gamma_(rng);
            if (!(rate > 0))
                return 0;
            using param = std::poisson_distribution<count_t>::param_type;
            return poisson_(rng, param{rate});
        }
        case Family::Zip:
            if (uniform01(rng) < model_.zip().omega)
                return 0;
            return poisson_(rng);
    }
    return 0;
}

count_t sample(CountModel const& model, Xoshiro256& rng)
{
    CountSampler sampler{model};
    return sampler(rng);
}

}  // namespace steinspc
