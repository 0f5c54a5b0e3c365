#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "stein.hpp"

namespace steinspc {

enum class ChartKind
{
    CChart,
    Ewma,
    AbEwma,
    AbcEwma
};

std::string_view to_string(ChartKind kind) noexcept;
/// Accepts "c"/"cchart", "ewma", "ab", "abc".
ChartKind parse_chart_kind(std::string_view name);

struct Limits
{
    double lcl;
    double ucl;
};

enum class Signal
{
    InControl,
    Alarm
};

/*!
 * Immutable chart design.
 *
 * EWMA and AB-EWMA use symmetric limits mu0 -+ L, ABC-EWMA uses 1 -+ L and
 * the c-chart alarms one-sidedly when a count reaches its threshold. For AB
 * and ABC charts the in-control Stein moments are computed once here.
 */
class ChartSpec
{
  public:
    static ChartSpec c_chart(double mu0, count_t threshold);
    static ChartSpec ewma(double lambda, double mu0, double limit);
    static ChartSpec ab_ewma(double lambda,
                             double mu0,
                             WeightFunction weight,
                             double limit,
                             Truncation const& trunc = {});
    static ChartSpec abc_ewma(double lambda,
                              double mu0,
                              WeightFunction weight,
                              double limit,
                              Truncation const& trunc = {});
    /// Dispatches on `kind`; `weight` is ignored for CChart/Ewma and
    /// `limit` is the threshold for CChart.
    static ChartSpec make(ChartKind kind,
                          double lambda,
                          double mu0,
                          WeightFunction weight,
                          double limit,
                          Truncation const& trunc = {});

    /// Same design with a different half-width; Stein moments are reused.
    ChartSpec with_limit(double limit) const;

    ChartKind kind() const noexcept { return kind_; }
    double lambda() const noexcept { return lambda_; }
    double mu0() const noexcept { return mu0_; }
    WeightFunction const& weight() const noexcept { return weight_; }
    double limit() const noexcept { return limit_; }
    count_t c_threshold() const noexcept { return threshold_; }
    SteinMoments const& moments() const noexcept { return moments_; }

    /// mu0 for EWMA/AB/c-chart, 1 for ABC.
    double center() const noexcept;
    /// For CChart: lcl = -inf, ucl = threshold (alarm iff x >= ucl).
    Limits limits() const noexcept;

  private:
    ChartSpec() = default;

    ChartKind kind_ = ChartKind::Ewma;
    double lambda_ = 1;
    double mu0_ = 1;
    WeightFunction weight_ = WeightFunction::constant_one();
    double limit_ = 0;
    count_t threshold_ = 0;
    SteinMoments moments_;
};

/// Streaming accumulators of one monitoring run.
struct ChartState
{
    count_t t = 0;
    double z = 0;  ///< ordinary EWMA
    double a = 0;  ///< smoothed x f(x)
    double b = 0;  ///< smoothed f(x+1)
    double c = 0;  ///< smoothed x (ABC only)
    double stat = 0;
    bool alarmed = false;
};

ChartState init(ChartSpec const& spec);

/// Strict violation of the limits alarms; on-limit values are in control.
/// For the c-chart `stat` is the count and alarms iff stat >= threshold.
Signal check(ChartSpec const& spec, double stat) noexcept;

/// Applies one observation. `alarmed` latches once set; monitoring can
/// continue past alarms.
ChartState update(ChartState const& state, ChartSpec const& spec, count_t x) noexcept;

struct MonitorResult
{
    /// 1-based index of the first alarm.
    std::optional<std::size_t> first_alarm;
    std::vector<double> trajectory;
    std::vector<bool> alarms;
};

MonitorResult monitor_series(ChartSpec const& spec, std::span<count_t const> series);

}  // namespace steinspc
