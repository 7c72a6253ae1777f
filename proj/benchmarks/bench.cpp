#include <benchmark/benchmark.h>

#include "fragstoch/asymptotics.hpp"
#include "fragstoch/fragmentation.hpp"
#include "fragstoch/paths.hpp"
#include "fragstoch/stable_pd.hpp"

using namespace fragstoch;

static void BM_NormalizedExcursion(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_normalized_excursion(n, Seed{1, i++}));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_NormalizedExcursion)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 16);

static void BM_TaggedFragment(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const GridPath e = sample_normalized_excursion(n, Seed{2, 0});
    for (auto _ : state) benchmark::DoNotOptimize(tagged_fragment(e, 0.37));
}
BENCHMARK(BM_TaggedFragment)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 16);

static void BM_BridgeMethodSampler(benchmark::State& state) {
    const StableParams p = StableParams::brownian();
    std::uint64_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            sample_conditioned_bridge_method(1.0, p, Seed{3, i++}, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BridgeMethodSampler)->Arg(8)->Arg(12)->Arg(14);

static void BM_LampertiSampler(benchmark::State& state) {
    const StableParams p = StableParams::brownian();
    std::uint64_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_conditioned_lamperti_method(p, Seed{4, i++}));
}
BENCHMARK(BM_LampertiSampler);

static void BM_StableDensityGeneric(benchmark::State& state) {
    const StableParams p{0.4, 1.0};
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(stable_density(1.0, x, p));
        x = x < 10.0 ? x * 1.7 : 0.1;
    }
}
BENCHMARK(BM_StableDensityGeneric);

static void BM_RefinedExcursion(benchmark::State& state) {
    std::uint64_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(refined_excursion(Seed{5, i++}));
}
BENCHMARK(BM_RefinedExcursion);

static void BM_Bes3HittingSeries(benchmark::State& state) {
    Rng rng(Seed{6, 0});
    for (auto _ : state) benchmark::DoNotOptimize(sample_bes3_hitting_time(1.0, rng, 200));
}
BENCHMARK(BM_Bes3HittingSeries);

BENCHMARK_MAIN();
