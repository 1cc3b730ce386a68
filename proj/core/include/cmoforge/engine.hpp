#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cmoforge/core.hpp"
#include "cmoforge/llm/backend.hpp"
#include "cmoforge/llm/generate.hpp"
#include "cmoforge/operators.hpp"
#include "cmoforge/rng.hpp"

namespace cmoforge::engine {

enum class FitnessMode { constrained, unconstrained };
enum class FeAccounting { per_eval, per_generation_n };

struct EngineConfig {
    std::size_t population_size = 100;  // N
    std::uint64_t fe_max = 10'000;
    double llm_offspring_fraction = 0.05;  // per population
    double llm_input_fraction = 0.10;      // per population
    ga::OperatorParams operators;
    std::uint64_t seed = 0;
    FeAccounting fe_accounting = FeAccounting::per_eval;
    int llm_retry_limit = 2;
    int prompt_precision = 6;
    int llm_batch_size = 1;

    std::size_t llm_offspring_count() const;  // round half up
    std::size_t llm_pool_size() const;        // ceiling
    void validate() const;
};

struct GenerationRecord {
    std::size_t generation = 0;
    std::uint64_t fe = 0;
    std::size_t feasible_count = 0;
    double best_cv = 0.0;
    std::optional<double> igd_value;
    std::optional<double> hv_value;
};

/// Reference data for per-generation indicator tracking. igd runs on raw
/// objectives; hv on objectives normalized by the front extremes against the
/// (hv_ref, ...) point.
struct MetricContext {
    std::vector<std::vector<double>> reference_front;
    double hv_ref = 1.1;
};

using Observer = std::function<void(const GenerationRecord&)>;

/// SPEA2 fitness over the pool: strength/raw dominance score plus the k-th
/// nearest neighbor density term, k = floor(sqrt(|pool|)). Smaller is better;
/// values below 1 are exactly the nondominated members. Constrained mode
/// ranks by constrained dominance, unconstrained by objective dominance only.
std::vector<double> spea2_fitness(const std::vector<Solution>& pool, FitnessMode mode);

/// Cuts the pool down to exactly n members: the nondominated set, truncated
/// by repeatedly dropping the most crowded member (nearest-neighbor distance,
/// ties by subsequent distances then index) or topped up by best fitness.
Population environmental_selection(const std::vector<Solution>& pool, std::size_t n,
                                   FitnessMode mode);

struct EngineState {
    Population pop1;  // constraint-aware
    Population pop2;  // constraint-blind
    BudgetCounter budget;
    std::size_t generation = 0;
    std::uint64_t accounted_fe = 0;
    bool finished = false;
    std::vector<GenerationRecord> history;
    RandomSource rng;
    std::vector<llm::LLMExchange> exchanges;

    explicit EngineState(std::uint64_t seed) : rng(seed) {}
};

/// Fills both populations with N uniform random solutions (2N evaluations).
EngineState initialize(const ProblemDefinition& problem, const EngineConfig& config);

/// One generation: each population breeds N offspring (GA share plus the LLM
/// share fed by a pool of uniformly sampled members), all offspring join both
/// selection unions, and each population is reselected to size N. Returns
/// false and discards partial offspring when the budget runs out mid-way.
bool run_generation(EngineState& state, const ProblemDefinition& problem,
                    const EngineConfig& config, llm::LLMBackend& backend,
                    const MetricContext* metrics);

struct RunResult {
    Population pop1;
    Population pop2;
    std::vector<GenerationRecord> history;
    std::vector<llm::LLMExchange> exchanges;
    std::uint64_t evaluations = 0;
    std::uint64_t accounted_fe = 0;
    std::size_t generations = 0;
};

/// Full run: initialize, loop generations until the budget is spent, report
/// pop1 as the result population. LLM failures degrade to the GA fallback
/// inside llm_generate and never abort the run.
RunResult run(const ProblemDefinition& problem, const EngineConfig& config,
              llm::LLMBackend& backend, const MetricContext* metrics = nullptr,
              const Observer& observer = {});

}  // namespace cmoforge::engine
