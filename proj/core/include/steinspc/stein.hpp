#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dist.hpp"

namespace steinspc {

enum class WeightKind
{
    ConstantOne,
    AbsLinear,  ///< |x - 1|
    AbsRoot,  ///< |x - 1|^{1/4}
    Log,  ///< ln x, with 0 * ln 0 = 0
    Tabulated
};

/*!
 * Stein weight f on the nonnegative integers.
 *
 * Only the two products that enter the charts are exposed: x*f(x) and
 * f(x+1). There is no f(0) accessor because the log weight is undefined
 * there.
 *
 * Tabulated weights hold f(0..M); lookups beyond M reuse f(M).
 */
class WeightFunction
{
  public:
    static WeightFunction constant_one() { return WeightFunction{WeightKind::ConstantOne}; }
    static WeightFunction abs_linear() { return WeightFunction{WeightKind::AbsLinear}; }
    static WeightFunction abs_root() { return WeightFunction{WeightKind::AbsRoot}; }
    static WeightFunction log() { return WeightFunction{WeightKind::Log}; }
    /// Values must be finite and nonnegative; at least one of f(1..) > 0.
    static WeightFunction tabulated(std::vector<double> values);

    /// "one", "abslinear", "absroot", "log" (plus a few aliases).
    static WeightFunction parse(std::string_view name);

    WeightKind kind() const noexcept { return kind_; }
    std::string name() const;

    /// x * f(x).
    double xf(count_t x) const noexcept;
    /// f(x + 1).
    double f_shift(count_t x) const noexcept;

    std::vector<double> const* table() const noexcept { return table_.get(); }

  private:
    explicit WeightFunction(WeightKind kind) : kind_(kind) {}

    double table_at(count_t x) const noexcept;

    WeightKind kind_;
    std::shared_ptr<std::vector<double> const> table_;
};

/// Truncation of the moment sums: adaptive tail tolerance by default, or a
/// fixed upper summation index.
struct Truncation
{
    double tail_tol = 1e-10;
    std::optional<count_t> fixed_m;

    static Truncation fixed(count_t m) { return {1e-10, m}; }
};

/// In-control Stein moments E[X f(X)] and E[f(X+1)] under Poisson(mu0).
struct SteinMoments
{
    double m10 = 0;
    double m01 = 0;
    double mu0 = 0;
    /// Last summed index; 0 for the constant weight, whose moments are exact.
    count_t truncation_m = 0;
};

SteinMoments stein_moments_poisson(WeightFunction const& f,
                                   double mu0,
                                   Truncation const& trunc = {});

/// E[X f(X)] - mu E[f(X+1)] under `model`; zero iff Poisson (for suitable f).
double stein_residual(WeightFunction const& f,
                      CountModel const& model,
                      Truncation const& trunc = {});

}  // namespace steinspc
