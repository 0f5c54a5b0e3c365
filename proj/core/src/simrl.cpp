#include "steinspc/simrl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "parallel.hpp"
#include "steinspc/errors.hpp"

namespace steinspc {
namespace {

// Replication budget for CED: at most this many indices per requested run.
constexpr std::uint64_t kMaxAttemptFactor = 1000;

void check_options(SimOptions const& opts, count_t tau)
{
    if (opts.reps == 0)
    {
        throw ParameterError("number of replications must be positive");
    }
    if (tau < 1)
    {
        throw ParameterError("change point must be >= 1");
    }
    if (opts.max_t < tau)
    {
        throw ParameterError("max_t must be at least the change point");
    }
}

}  // namespace

Replication simulate_replication(ChartSpec const& spec,
                                 ChangeScenario const& scenario,
                                 std::uint64_t seed,
                                 std::uint64_t cell,
                                 std::uint64_t replication,
                                 count_t max_t)
{
    auto rng = make_substream(seed, cell, replication);
    CountSampler in_control{scenario.in_model};
    CountSampler out_of_control{scenario.out_model};
    ChartState state = init(spec);
    for (count_t t = 1; t <= max_t; ++t)
    {
        count_t const x = t < scenario.tau ? in_control(rng) : out_of_control(rng);
        state = update(state, spec, x);
        if (state.alarmed)
        {
            return {t, false};
        }
    }
    return {max_t, true};
}

std::vector<Replication> simulate_replications(ChartSpec const& spec,
                                               ChangeScenario const& scenario,
                                               SimOptions const& opts,
                                               std::uint64_t first,
                                               std::uint64_t count)
{
    std::vector<Replication> out(count);
    detail::parallel_for(count, opts.workers, [&](std::size_t i) {
        out[i] = simulate_replication(spec, scenario, opts.seed, opts.cell, first + i,
                                      opts.max_t);
    });
    return out;
}

RunLengthStats summarize(std::span<Replication const> kept,
                         count_t tau,
                         std::uint64_t requested,
                         std::uint64_t discarded,
                         count_t max_t)
{
    RunLengthStats stats;
    stats.reps_requested = requested;
    stats.reps_used = kept.size();
    stats.reps_discarded = discarded;
    stats.reps_attempted = kept.size() + discarded;
    stats.max_t = max_t;
    if (kept.empty())
    {
        return stats;
    }
    // Welford keeps the variance accurate for long runs.
    double mean = 0;
    double m2 = 0;
    std::uint64_t n = 0;
    for (auto const& r : kept)
    {
        double const delay = static_cast<double>(r.alarm_time - tau + 1);
        ++n;
        double const d = delay - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (delay - mean);
        if (r.censored)
            ++stats.reps_censored;
    }
    stats.mean = mean;
    stats.se = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n))
                     : std::numeric_limits<double>::quiet_NaN();
    return stats;
}

RunLengthStats ced(ChartSpec const& spec, ChangeScenario const& scenario, SimOptions const& opts)
{
    check_options(opts, scenario.tau);

    std::vector<Replication> kept;
    kept.reserve(opts.reps);
    std::uint64_t discarded = 0;
    std::uint64_t attempted = 0;
    std::uint64_t batch = opts.reps;
    std::uint64_t const budget = opts.reps * kMaxAttemptFactor;

    while (kept.size() < opts.reps && attempted < budget)
    {
        batch = std::min(batch, budget - attempted);
        auto const runs = simulate_replications(spec, scenario, opts, attempted, batch);
        attempted += batch;
        for (auto const& r : runs)
        {
            if (kept.size() == opts.reps)
                break;
            if (r.alarm_time < scenario.tau)
                ++discarded;
            else
                kept.push_back(r);
        }
        // Inflate the next batch by the observed survival rate.
        double const survival = static_cast<double>(kept.size() + 1)
                                / static_cast<double>(kept.size() + discarded + 1);
        auto const missing = static_cast<double>(opts.reps - kept.size());
        batch = static_cast<std::uint64_t>(std::ceil(1.1 * missing / survival)) + 16;
    }

    if (kept.empty())
    {
        throw EstimationError("every replication alarmed before the change point");
    }
    auto stats = summarize(kept, scenario.tau, opts.reps, discarded, opts.max_t);
    if (stats.reps_censored == stats.reps_used)
    {
        throw EstimationError("every replication was censored at max_t = "
                              + std::to_string(opts.max_t));
    }
    return stats;
}

RunLengthStats zero_state_arl(ChartSpec const& spec, CountModel const& model, SimOptions const& opts)
{
    return ced(spec, ChangeScenario::zero_state(model), opts);
}

std::vector<CellOutcome> run_table(std::span<TableCell const> grid, SimOptions const& opts)
{
    std::vector<CellOutcome> out;
    out.reserve(grid.size());
    for (auto const& cell : grid)
    {
        SimOptions cell_opts = opts;
        cell_opts.cell = cell.cell_id;
        CellOutcome outcome;
        try
        {
            outcome.stats = ced(cell.spec, cell.scenario, cell_opts);
        }
        catch (Error const& e)
        {
            outcome.error = e.what();
        }
        out.push_back(std::move(outcome));
    }
    return out;
}

}  // namespace steinspc
