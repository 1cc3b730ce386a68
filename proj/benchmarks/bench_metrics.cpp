#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cmoforge/metrics.hpp"
#include "cmoforge/problems.hpp"
#include "cmoforge/rng.hpp"

using namespace cmoforge;

namespace {

std::vector<Solution> feasible_cloud(std::size_t size, std::size_t m,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Solution> pop;
    pop.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        Solution s;
        s.objs.resize(m);
        for (double& v : s.objs) v = uniform01(rng);
        s.cv = 0.0;
        pop.push_back(std::move(s));
    }
    return pop;
}

}  // namespace

static void BM_Igd(benchmark::State& state) {
    const auto problem = tric::make_problem(tric::TricId::tric2);
    const auto front = tric::sample_cpf(problem, static_cast<int>(state.range(0)));
    const auto pop = feasible_cloud(100, 2, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(metrics::igd(front, pop));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Igd)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

static void BM_Hypervolume2D(benchmark::State& state) {
    const auto pop = feasible_cloud(static_cast<std::size_t>(state.range(0)), 2, 4);
    const std::vector<double> ref{1.1, 1.1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(metrics::hypervolume(pop, ref));
    }
}
BENCHMARK(BM_Hypervolume2D)->RangeMultiplier(2)->Range(64, 1024);

static void BM_Hypervolume3D(benchmark::State& state) {
    const auto pop = feasible_cloud(static_cast<std::size_t>(state.range(0)), 3, 5);
    const std::vector<double> ref{1.1, 1.1, 1.1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(metrics::hypervolume(pop, ref));
    }
}
BENCHMARK(BM_Hypervolume3D)->RangeMultiplier(2)->Range(64, 512);

static void BM_TricEvaluator(benchmark::State& state) {
    const auto problem =
        tric::make_problem(static_cast<tric::TricId>(state.range(0)), 10);
    std::vector<double> x(10, 0.4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(problem.evaluator(x));
    }
}
BENCHMARK(BM_TricEvaluator)->DenseRange(0, 6);

BENCHMARK_MAIN();
