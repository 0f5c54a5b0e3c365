#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "charts.hpp"
#include "dist.hpp"

namespace steinspc {

inline constexpr double kDefaultTargetArl = 370.0;
/// Default run-length cap: 100 times the default target ARL.
inline constexpr count_t kDefaultMaxT = 100 * 370;

/// Observations at t < tau come from `in_model`, at t >= tau from
/// `out_model`. tau == 1 is the zero-state case.
struct ChangeScenario
{
    CountModel in_model;
    CountModel out_model;
    count_t tau = 1;

    static ChangeScenario zero_state(CountModel const& model)
    {
        return {model, model, 1};
    }
};

struct SimOptions
{
    std::uint64_t reps = 10000;
    std::uint64_t seed = 1;
    /// Work-item id mixed into every substream (grid cell index).
    std::uint64_t cell = 0;
    count_t max_t = kDefaultMaxT;
    /// 0 selects std::thread::hardware_concurrency().
    unsigned workers = 0;
};

/// Monte Carlo run-length summary, in plotted points.
struct RunLengthStats
{
    double mean = 0;
    /// sample SD / sqrt(reps_used); NaN when reps_used == 1.
    double se = 0;
    std::uint64_t reps_requested = 0;
    std::uint64_t reps_used = 0;
    /// CED only: runs that alarmed before the change point.
    std::uint64_t reps_discarded = 0;
    /// Runs that hit max_t; counted with run length max_t - tau + 1.
    std::uint64_t reps_censored = 0;
    /// Replication indices consumed (used + discarded).
    std::uint64_t reps_attempted = 0;
    count_t max_t = 0;
};

/// Outcome of one replication.
struct Replication
{
    /// 1-based time of the first alarm, or max_t when censored.
    count_t alarm_time = 0;
    bool censored = false;
};

/// Runs replication `replication` on its own substream. Deterministic in
/// (spec, scenario, seed, cell, replication, max_t).
Replication simulate_replication(ChartSpec const& spec,
                                 ChangeScenario const& scenario,
                                 std::uint64_t seed,
                                 std::uint64_t cell,
                                 std::uint64_t replication,
                                 count_t max_t);

/// Replications [first, first + count), possibly in parallel; result i
/// belongs to replication first + i.
std::vector<Replication> simulate_replications(ChartSpec const& spec,
                                               ChangeScenario const& scenario,
                                               SimOptions const& opts,
                                               std::uint64_t first,
                                               std::uint64_t count);

/// Zero-state ARL. Throws EstimationError if every run is censored.
RunLengthStats zero_state_arl(ChartSpec const& spec,
                              CountModel const& model,
                              SimOptions const& opts);

/*!
 * Conditional expected delay CED(tau).
 *
 * Runs alarming before tau are discarded and further replication indices
 * are drawn until `opts.reps` runs survive; the kept runs are the first
 * surviving ones by index, so the result does not depend on batching or
 * worker count. With tau == 1 this equals zero_state_arl().
 */
RunLengthStats ced(ChartSpec const& spec,
                   ChangeScenario const& scenario,
                   SimOptions const& opts);

/// Summarizes delays (alarm_time - tau + 1) of kept runs.
RunLengthStats summarize(std::span<Replication const> kept,
                         count_t tau,
                         std::uint64_t requested,
                         std::uint64_t discarded,
                         count_t max_t);

struct TableCell
{
    ChartSpec spec;
    ChangeScenario scenario;
    /// Substream id of the cell; keep it stable across grid subsets.
    std::uint64_t cell_id = 0;
};

struct CellOutcome
{
    std::optional<RunLengthStats> stats;
    std::string error;
};

/// Evaluates every cell; a failing cell records its error and the rest
/// still run. `opts.cell` is ignored in favour of each cell's id.
std::vector<CellOutcome> run_table(std::span<TableCell const> grid, SimOptions const& opts);

}  // namespace steinspc
