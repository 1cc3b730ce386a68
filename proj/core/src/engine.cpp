#include "cmoforge/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cmoforge/metrics.hpp"

namespace cmoforge::engine {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Objective-space distance with a guard: anything touching a poisoned
// (non-finite) objective vector counts as infinitely far.
double objective_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i])) return kInf;
        const double d = a[i] - b[i];
        d2 += d * d;
    }
    return std::sqrt(d2);
}

bool dominates(const Solution& a, const Solution& b, FitnessMode mode) {
    if (mode == FitnessMode::constrained)
        return cdp_compare(a, b) == CdpOrder::a_better;
    return pareto_dominates(a.objs, b.objs);
}

// Sorted distances from member `i` to every other index in `alive`.
std::vector<double> sorted_distances(const std::vector<Solution>& pool,
                                     const std::vector<std::size_t>& alive,
                                     std::size_t i) {
    std::vector<double> d;
    d.reserve(alive.size() - 1);
    for (std::size_t j : alive)
        if (j != i) d.push_back(objective_distance(pool[i].objs, pool[j].objs));
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace

std::size_t EngineConfig::llm_offspring_count() const {
    return static_cast<std::size_t>(std::floor(
        llm_offspring_fraction * static_cast<double>(population_size) + 0.5));
}

std::size_t EngineConfig::llm_pool_size() const {
    // Epsilon guards against 0.1 * N landing a hair above the integer.
    return static_cast<std::size_t>(std::ceil(
        llm_input_fraction * static_cast<double>(population_size) - 1e-9));
}

void EngineConfig::validate() const {
    if (population_size < 2)
        throw ContractViolation("engine config: population size must be >= 2");
    if (!(llm_offspring_fraction >= 0.0 && llm_offspring_fraction <= 0.5))
        throw ContractViolation("engine config: llm_offspring_fraction outside [0, 0.5]");
    if (!(llm_input_fraction >= 0.0 && llm_input_fraction <= 0.5))
        throw ContractViolation("engine config: llm_input_fraction outside [0, 0.5]");
    if (llm_pool_size() < 2)
        throw ContractViolation(
            "engine config: llm input pool must hold at least 2 solutions");
    if (fe_max < 2 * population_size)
        throw ContractViolation("engine config: fe_max cannot cover initialization");
    if (llm_retry_limit < 0)
        throw ContractViolation("engine config: llm_retry_limit must be >= 0");
    if (prompt_precision < 1)
        throw ContractViolation("engine config: prompt_precision must be >= 1");
    if (llm_batch_size < 1)
        throw ContractViolation("engine config: llm_batch_size must be >= 1");
}

std::vector<double> spea2_fitness(const std::vector<Solution>& pool, FitnessMode mode) {
    const std::size_t n = pool.size();
    if (n == 0) throw ContractViolation("spea2_fitness: empty pool");

    std::vector<int> strength(n, 0);
    std::vector<std::vector<std::size_t>> dominators(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(pool[i], pool[j], mode)) {
                ++strength[i];
                dominators[j].push_back(i);
            } else if (dominates(pool[j], pool[i], mode)) {
                ++strength[j];
                dominators[i].push_back(j);
            }
        }
    }

    const std::size_t k =
        static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    std::vector<double> fitness(n, 0.0);
    std::vector<double> dist;
    dist.reserve(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
        double raw = 0.0;
        for (std::size_t d : dominators[i]) raw += strength[d];

        dist.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) dist.push_back(objective_distance(pool[i].objs, pool[j].objs));
        double sigma = 0.0;  // k-th neighbor absent -> 0
        if (k >= 1 && dist.size() >= k) {
            std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
            sigma = dist[k - 1];
        }
        fitness[i] = raw + 1.0 / (sigma + 2.0);
    }
    return fitness;
}

Population environmental_selection(const std::vector<Solution>& pool, std::size_t n,
                                   FitnessMode mode) {
    if (pool.size() < n)
        throw ContractViolation("environmental_selection: pool smaller than N");

    const std::vector<double> fitness = spea2_fitness(pool, mode);
    std::vector<std::size_t> selected;
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (fitness[i] < 1.0) selected.push_back(i);

    if (selected.size() < n) {
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (!(fitness[i] < 1.0)) rest.push_back(i);
        std::sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
            if (fitness[a] != fitness[b]) return fitness[a] < fitness[b];
            return a < b;
        });
        selected.insert(selected.end(), rest.begin(),
                        rest.begin() + static_cast<std::ptrdiff_t>(n - selected.size()));
        std::sort(selected.begin(), selected.end());
    } else if (selected.size() > n) {
        // Iterative crowding truncation. Nearest-neighbor distances are kept
        // incrementally; full sorted-distance vectors are built only to break
        // exact ties.
        std::vector<std::size_t> alive = selected;
        std::vector<double> nearest(pool.size(), kInf);
        std::vector<std::size_t> nearest_to(pool.size(), SIZE_MAX);

        const auto rescan = [&](std::size_t i) {
            nearest[i] = kInf;
            nearest_to[i] = SIZE_MAX;
            for (std::size_t j : alive) {
                if (j == i) continue;
                const double d = objective_distance(pool[i].objs, pool[j].objs);
                if (d < nearest[i]) {
                    nearest[i] = d;
                    nearest_to[i] = j;
                }
            }
        };
        for (std::size_t i : alive) rescan(i);

        while (alive.size() > n) {
            double min_d = kInf;
            for (std::size_t i : alive) min_d = std::min(min_d, nearest[i]);
            std::vector<std::size_t> candidates;
            for (std::size_t i : alive)
                if (nearest[i] == min_d) candidates.push_back(i);

            std::size_t victim = candidates.front();
            if (candidates.size() > 1) {
                std::vector<double> best_vec = sorted_distances(pool, alive, victim);
                for (std::size_t c = 1; c < candidates.size(); ++c) {
                    std::vector<double> vec = sorted_distances(pool, alive, candidates[c]);
                    if (std::lexicographical_compare(vec.begin(), vec.end(),
                                                     best_vec.begin(), best_vec.end())) {
                        victim = candidates[c];
                        best_vec = std::move(vec);
                    }
                }
            }

            alive.erase(std::find(alive.begin(), alive.end(), victim));
            for (std::size_t i : alive)
                if (nearest_to[i] == victim) rescan(i);
        }
        selected = std::move(alive);
        std::sort(selected.begin(), selected.end());
    }

    Population out;
    out.capacity = n;
    out.members.reserve(n);
    for (std::size_t i : selected) out.members.push_back(pool[i]);
    return out;
}

EngineState initialize(const ProblemDefinition& problem, const EngineConfig& config) {
    config.validate();
    EngineState state(config.seed);
    state.budget.fe_max = config.fe_accounting == FeAccounting::per_eval
                              ? config.fe_max
                              : std::numeric_limits<std::uint64_t>::max();
    auto& init_rng = state.rng.stream("init");

    const auto fill = [&](Population& pop) {
        pop.capacity = config.population_size;
        pop.members.reserve(config.population_size);
        std::vector<double> x(static_cast<std::size_t>(problem.n));
        for (std::size_t s = 0; s < config.population_size; ++s) {
            for (int i = 0; i < problem.n; ++i) {
                const auto j = static_cast<std::size_t>(i);
                x[j] = problem.lower[j] +
                       uniform01(init_rng) * (problem.upper[j] - problem.lower[j]);
            }
            pop.members.push_back(evaluate(problem, x, state.budget, Provenance::init));
        }
    };
    fill(state.pop1);
    fill(state.pop2);
    return state;
}

namespace {

struct Brood {
    std::vector<std::vector<double>> ga_decs;
    std::vector<llm::LlmOffspring> llm_offspring;
};

Brood breed(EngineState& state, Population& pop, FitnessMode mode,
            const ProblemDefinition& problem, const EngineConfig& config,
            llm::LLMBackend& backend, const char* tag) {
    Brood brood;
    const std::size_t n_llm = config.llm_offspring_count();
    const std::size_t n_ga = config.population_size - n_llm;

    if (n_ga > 0) {
        const std::vector<double> fitness = spea2_fitness(pop.members, mode);
        const std::size_t pairs = (n_ga + 1) / 2;
        const auto parents = ga::binary_tournament(pop.size(), fitness, 2 * pairs,
                                                   state.rng.stream("mating"));
        for (std::size_t p = 0; p < pairs && brood.ga_decs.size() < n_ga; ++p) {
            auto [c1, c2] = ga::sbx_crossover(
                pop.members[parents[2 * p]].decs, pop.members[parents[2 * p + 1]].decs,
                config.operators, problem.lower, problem.upper, state.rng.stream("sbx"));
            brood.ga_decs.push_back(ga::polynomial_mutation(
                std::move(c1), config.operators, problem.lower, problem.upper,
                state.rng.stream("mutation")));
            if (brood.ga_decs.size() < n_ga)
                brood.ga_decs.push_back(ga::polynomial_mutation(
                    std::move(c2), config.operators, problem.lower, problem.upper,
                    state.rng.stream("mutation")));
        }
    }

    if (n_llm > 0) {
        auto& llm_rng = state.rng.stream("llm-sampling");
        const auto pool_idx =
            sample_without_replacement(llm_rng, config.llm_pool_size(), pop.size());
        std::vector<Solution> pool;
        pool.reserve(pool_idx.size());
        for (std::size_t i : pool_idx) pool.push_back(pop.members[i]);

        llm::GenerateOptions options;
        options.retry_limit = config.llm_retry_limit;
        options.precision = config.prompt_precision;
        options.batch_size = config.llm_batch_size;
        options.fallback_operators = config.operators;

        llm::PromptMeta meta{problem.name, state.generation + 1, tag};
        brood.llm_offspring =
            llm::llm_generate(pool, n_llm, backend, options, meta, problem.n,
                              problem.lower, problem.upper, llm_rng, state.exchanges);
    }
    return brood;
}

}  // namespace

bool run_generation(EngineState& state, const ProblemDefinition& problem,
                    const EngineConfig& config, llm::LLMBackend& backend,
                    const MetricContext* metrics) {
    if (state.finished) return false;

    Brood b1 = breed(state, state.pop1, FitnessMode::constrained, problem, config,
                     backend, "pop1");
    Brood b2 = breed(state, state.pop2, FitnessMode::unconstrained, problem, config,
                     backend, "pop2");

    // Evaluate everything in a fixed order; a budget failure discards the
    // whole brood and finalizes the run.
    std::vector<Solution> offspring;
    offspring.reserve(2 * config.population_size);
    try {
        for (Brood* b : {&b1, &b2}) {
            for (auto& decs : b->ga_decs)
                offspring.push_back(
                    evaluate(problem, std::move(decs), state.budget, Provenance::ga));
            for (auto& child : b->llm_offspring)
                offspring.push_back(evaluate(problem, std::move(child.decs),
                                             state.budget, child.provenance));
        }
    } catch (const BudgetExhausted&) {
        state.finished = true;
        return false;
    }

    std::vector<Solution> union1 = state.pop1.members;
    union1.insert(union1.end(), offspring.begin(), offspring.end());
    std::vector<Solution> union2 = state.pop2.members;
    union2.insert(union2.end(), offspring.begin(), offspring.end());

    state.pop1 = environmental_selection(union1, config.population_size,
                                         FitnessMode::constrained);
    state.pop2 = environmental_selection(union2, config.population_size,
                                         FitnessMode::unconstrained);
    ++state.generation;
    if (config.fe_accounting == FeAccounting::per_generation_n)
        state.accounted_fe += config.population_size;
    else
        state.accounted_fe = state.budget.fe;

    GenerationRecord record;
    record.generation = state.generation;
    record.fe = state.budget.fe;
    record.best_cv = kInf;
    for (const auto& s : state.pop1.members) {
        if (s.feasible()) ++record.feasible_count;
        record.best_cv = std::min(record.best_cv, s.cv);
    }
    if (metrics) {
        const auto report =
            metrics::compute_report(state.pop1.members, metrics->reference_front,
                                    metrics->hv_ref);
        record.igd_value = report.igd;
        record.hv_value = report.hv;
    }
    state.history.push_back(std::move(record));
    return true;
}

RunResult run(const ProblemDefinition& problem, const EngineConfig& config,
              llm::LLMBackend& backend, const MetricContext* metrics,
              const Observer& observer) {
    EngineState state = initialize(problem, config);
    if (config.fe_accounting == FeAccounting::per_eval)
        state.accounted_fe = state.budget.fe;

    while (!state.finished) {
        if (config.fe_accounting == FeAccounting::per_eval) {
            if (state.budget.remaining() == 0) break;
        } else {
            if (state.accounted_fe > config.fe_max) break;
        }
        if (!run_generation(state, problem, config, backend, metrics)) break;
        if (observer) observer(state.history.back());
    }

    RunResult result;
    result.pop1 = std::move(state.pop1);
    result.pop2 = std::move(state.pop2);
    result.history = std::move(state.history);
    result.exchanges = std::move(state.exchanges);
    result.evaluations = state.budget.fe;
    result.accounted_fe = state.accounted_fe;
    result.generations = result.history.size();
    return result;
}

}  // namespace cmoforge::engine
