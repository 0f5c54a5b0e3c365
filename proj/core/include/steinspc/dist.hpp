#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "rng.hpp"

namespace steinspc {

/// Nonnegative count observation.
using count_t = std::int64_t;

enum class Family
{
    Poisson,
    NegBin,
    Zip
};

std::string_view to_string(Family family) noexcept;
/// Accepts "poisson"/"poi", "negbin"/"nb", "zip" (case-insensitive).
Family parse_family(std::string_view name);

/// Negative binomial with PMF Gamma(n+x)/(Gamma(n) x!) p^n (1-p)^x.
struct NbParams
{
    double n;
    double p;
};

/// Zero-inflated Poisson: extra point mass omega at zero, Poisson(lambda)
/// otherwise.
struct ZipParams
{
    double omega;
    double lambda;
};

struct Moments
{
    double mean;
    double variance;
};

/// Moment-matched NB parameters: p = 1/disp, n = mu/(disp-1).
NbParams nb_params(double mu, double disp);

/// Moment-matched ZIP parameters: lambda = mu + disp - 1,
/// omega = (disp-1)/(mu+disp-1).
ZipParams zip_params(double mu, double disp);

/*!
 * Count distribution identified by its mean and dispersion index
 * I = variance / mean.
 *
 * Poisson requires disp == 1, NegBin requires disp > 1, Zip requires
 * disp >= 1 (disp == 1 is plain Poisson). Internal parameters are derived
 * from (mu, disp) on construction and never set independently.
 */
class CountModel
{
  public:
    static CountModel poisson(double mu);
    static CountModel negbin(double mu, double disp);
    static CountModel zip(double mu, double disp);
    static CountModel make(Family family, double mu, double disp);

    Family family() const noexcept { return family_; }
    double mu() const noexcept { return mu_; }
    double disp() const noexcept { return disp_; }

    /// Only meaningful for the matching family.
    NbParams const& nb() const noexcept { return nb_; }
    ZipParams const& zip() const noexcept { return zip_; }

    /// P(X = x); zero for negative x.
    double pmf(count_t x) const;

    /// Exact mean and variance recovered from the internal parameters.
    Moments moments() const noexcept;

    /*!
     * PMF values on {0, ..., M}.
     *
     * With `fixed_m` the table stops there; otherwise M is the smallest
     * value with P(X > M) < tail_tol. Throws TruncationError if the
     * tolerance is not reached below an internal hard cap.
     */
    std::vector<double>
    pmf_table(double tail_tol, std::optional<count_t> fixed_m = {}) const;

    friend bool operator==(CountModel const&, CountModel const&) = default;

  private:
    CountModel(Family family, double mu, double disp);

    Family family_;
    double mu_;
    double disp_;
    NbParams nb_{};
    ZipParams zip_{};
};

/*!
 * Stateful sampler bound to one model.
 *
 * Owns its <random> distribution objects (some of which cache values), so
 * each replication should hold its own sampler. Draws are a deterministic
 * function of the engine state.
 */
class CountSampler
{
  public:
    explicit CountSampler(CountModel const& model);

    count_t operator()(Xoshiro256& rng);

    CountModel const& model() const noexcept { return model_; }

  private:
    CountModel model_;
    std::poisson_distribution<count_t> poisson_;
    std::gamma_distribution<double> gamma_;
};

/// Single draw; builds a fresh sampler each call.
count_t sample(CountModel const& model, Xoshiro256& rng);

}  // namespace steinspc
