#include <benchmark/benchmark.h>

#include "steinspc/dist.hpp"
#include "steinspc/simrl.hpp"

namespace {

using namespace steinspc;

void run_sampler(benchmark::State& state, CountModel const& model)
{
    Xoshiro256 rng{7};
    CountSampler sampler{model};
    for (auto _ : state)
        benchmark::DoNotOptimize(sampler(rng));
    state.SetItemsProcessed(state.iterations());
}

void BM_SamplePoisson(benchmark::State& state) { run_sampler(state, CountModel::poisson(2.0)); }
BENCHMARK(BM_SamplePoisson);

void BM_SampleNegBin(benchmark::State& state)
{
    run_sampler(state, CountModel::negbin(2.0, 5.0 / 3.0));
}
BENCHMARK(BM_SampleNegBin);

void BM_SampleZip(benchmark::State& state) { run_sampler(state, CountModel::zip(2.0, 5.0 / 3.0)); }
BENCHMARK(BM_SampleZip);

void BM_ZeroStateArl(benchmark::State& state)
{
    auto const spec = ChartSpec::abc_ewma(0.1, 2.0, WeightFunction::abs_linear(), 0.463);
    SimOptions opts;
    opts.reps = 1000;
    opts.workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(zero_state_arl(spec, CountModel::poisson(2.0), opts).mean);
}
BENCHMARK(BM_ZeroStateArl)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
