#include <vector>

#include <benchmark/benchmark.h>

#include "steinspc/charts.hpp"
#include "steinspc/stein.hpp"

namespace {

using namespace steinspc;

std::vector<count_t> series(std::size_t n)
{
    Xoshiro256 rng{1};
    CountSampler sampler{CountModel::zip(2.0, 5.0 / 3.0)};
    std::vector<count_t> out(n);
    for (auto& x : out)
        x = sampler(rng);
    return out;
}

void run_updates(benchmark::State& state, ChartSpec const& spec)
{
    auto const xs = series(4096);
    for (auto _ : state)
    {
        ChartState s = init(spec);
        for (count_t x : xs)
            s = update(s, spec, x);
        benchmark::DoNotOptimize(s.stat);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
}

void BM_UpdateEwma(benchmark::State& state)
{
    run_updates(state, ChartSpec::ewma(0.1, 2.0, 0.877));
}
BENCHMARK(BM_UpdateEwma);

void BM_UpdateAbLog(benchmark::State& state)
{
    run_updates(state, ChartSpec::ab_ewma(0.1, 2.0, WeightFunction::log(), 1.089));
}
BENCHMARK(BM_UpdateAbLog);

void BM_UpdateAbcRoot(benchmark::State& state)
{
    run_updates(state, ChartSpec::abc_ewma(0.1, 2.0, WeightFunction::abs_root(), 0.382));
}
BENCHMARK(BM_UpdateAbcRoot);

void BM_SteinMoments(benchmark::State& state)
{
    double const mu0 = static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(stein_moments_poisson(WeightFunction::abs_root(), mu0));
}
BENCHMARK(BM_SteinMoments)->Arg(2)->Arg(10)->Arg(100);

}  // namespace
