#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cmoforge/engine.hpp"
#include "cmoforge/rng.hpp"

using namespace cmoforge;

namespace {

std::vector<Solution> random_pool(std::size_t size, std::size_t m, bool constrained,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Solution> pool;
    pool.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        Solution s;
        s.objs.resize(m);
        for (double& v : s.objs) v = uniform01(rng);
        s.cv = constrained && uniform01(rng) < 0.5 ? uniform01(rng) : 0.0;
        pool.push_back(std::move(s));
    }
    return pool;
}

}  // namespace

static void BM_Spea2Fitness(benchmark::State& state) {
    const auto pool = random_pool(static_cast<std::size_t>(state.range(0)), 2, true, 1);
    for (auto _ : state) {
        auto fitness = engine::spea2_fitness(pool, engine::FitnessMode::constrained);
        benchmark::DoNotOptimize(fitness);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Spea2Fitness)->RangeMultiplier(2)->Range(64, 512)->Complexity();

static void BM_EnvironmentalSelection(benchmark::State& state) {
    // Union of 3N mostly-nondominated members: the truncation-heavy case.
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const auto pool = random_pool(3 * n, 2, false, 2);
    for (auto _ : state) {
        auto selected =
            engine::environmental_selection(pool, n, engine::FitnessMode::unconstrained);
        benchmark::DoNotOptimize(selected);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EnvironmentalSelection)->RangeMultiplier(2)->Range(50, 200)->Complexity();

BENCHMARK_MAIN();
