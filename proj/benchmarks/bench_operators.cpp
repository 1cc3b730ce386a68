#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cmoforge/llm/prompt.hpp"
#include "cmoforge/operators.hpp"
#include "cmoforge/rng.hpp"

using namespace cmoforge;

static void BM_SbxPlusMutation(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::vector<double> lo(n, 0.0), hi(n, 1.0);
    std::vector<double> p1(n, 0.25), p2(n, 0.75);
    ga::OperatorParams params;
    std::mt19937_64 rng(6);
    for (auto _ : state) {
        auto [c1, c2] = ga::sbx_crossover(p1, p2, params, lo, hi, rng);
        c1 = ga::polynomial_mutation(std::move(c1), params, lo, hi, rng);
        c2 = ga::polynomial_mutation(std::move(c2), params, lo, hi, rng);
        benchmark::DoNotOptimize(c1);
        benchmark::DoNotOptimize(c2);
    }
}
BENCHMARK(BM_SbxPlusMutation)->RangeMultiplier(2)->Range(8, 128);

static void BM_BuildPrompt(benchmark::State& state) {
    const int pool = static_cast<int>(state.range(0));
    std::vector<Solution> feasible, infeasible;
    std::mt19937_64 rng(7);
    for (int i = 0; i < pool; ++i) {
        Solution s;
        s.decs = {uniform01(rng), uniform01(rng), uniform01(rng)};
        s.objs = {uniform01(rng), uniform01(rng)};
        s.cv = i % 2 ? uniform01(rng) : 0.0;
        (s.cv == 0.0 ? feasible : infeasible).push_back(std::move(s));
    }
    const std::vector<double> lo(3, 0.0), hi(3, 1.0);
    for (auto _ : state) {
        auto bundle =
            llm::build_prompt(feasible, infeasible, 3, lo, hi, 6, {"bench", 1, "pop1"});
        benchmark::DoNotOptimize(bundle);
    }
}
BENCHMARK(BM_BuildPrompt)->RangeMultiplier(2)->Range(4, 64);

static void BM_ParseResponse(benchmark::State& state) {
    const std::vector<double> lo(10, 0.0), hi(10, 1.0);
    const std::string text =
        "Sure, here you go: <start>0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, "
        "0.95<end> done";
    for (auto _ : state) {
        benchmark::DoNotOptimize(llm::parse_response(text, 10, lo, hi));
    }
}
BENCHMARK(BM_ParseResponse);

BENCHMARK_MAIN();
