#include "cmoforge/engine.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

#include "cmoforge/metrics.hpp"
#include "cmoforge/problems.hpp"

using namespace cmoforge;
using namespace cmoforge::engine;

namespace {

Solution feasible_at(std::vector<double> objs) {
    Solution s;
    s.objs = std::move(objs);
    s.cv = 0.0;
    return s;
}

class CountingBackend final : public llm::LLMBackend {
public:
    explicit CountingBackend(std::uint64_t seed) : inner_(seed) {}
    llm::Completion complete(const std::string& prompt) override {
        ++calls;
        return inner_.complete(prompt);
    }
    std::string identity() const override { return "counting"; }
    std::size_t calls = 0;

private:
    llm::SurrogateBackend inner_;
};

EngineConfig small_config() {
    EngineConfig config;
    config.population_size = 20;
    config.fe_max = 1200;
    config.llm_offspring_fraction = 0.05;  // 1 offspring per population
    config.llm_input_fraction = 0.2;       // pool of 4
    config.seed = 7;
    return config;
}

}  // namespace

TEST_CASE("spea2_fitness hand-computed pair") {
    std::vector<Solution> pool{feasible_at({0.0, 0.0}), feasible_at({1.0, 1.0})};
    const auto fitness = spea2_fitness(pool, FitnessMode::constrained);
    const double density = 1.0 / (std::sqrt(2.0) + 2.0);
    CHECK(fitness[0] == doctest::Approx(density).epsilon(1e-12));
    CHECK(fitness[1] == doctest::Approx(1.0 + density).epsilon(1e-12));
}

TEST_CASE("spea2_fitness singleton scores 0.5") {
    const auto fitness =
        spea2_fitness({feasible_at({0.3, 0.4})}, FitnessMode::unconstrained);
    CHECK(fitness[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("spea2_fitness: all nondominated means all below 1") {
    std::vector<Solution> pool;
    for (int i = 0; i < 8; ++i)
        pool.push_back(feasible_at({i * 0.125, 1.0 - i * 0.125}));
    for (double f : spea2_fitness(pool, FitnessMode::constrained)) CHECK(f < 1.0);
}

TEST_CASE("spea2_fitness modes differ on infeasible solutions") {
    // b dominates a on objectives but is infeasible.
    Solution a = feasible_at({0.5, 0.5});
    Solution b = feasible_at({0.2, 0.2});
    b.cv = 1.0;
    const auto constrained = spea2_fitness({a, b}, FitnessMode::constrained);
    CHECK(constrained[0] < 1.0);
    CHECK(constrained[1] > 1.0);
    const auto unconstrained = spea2_fitness({a, b}, FitnessMode::unconstrained);
    CHECK(unconstrained[0] > 1.0);
    CHECK(unconstrained[1] < 1.0);
}

TEST_CASE("environmental_selection keeps a nondominated union unchanged") {
    std::vector<Solution> pool;
    for (int i = 0; i < 6; ++i) pool.push_back(feasible_at({i * 0.2, 1.0 - i * 0.2}));
    const Population selected =
        environmental_selection(pool, 6, FitnessMode::constrained);
    REQUIRE(selected.size() == 6);
    std::multiset<double> want, got;
    for (const auto& s : pool) want.insert(s.objs[0]);
    for (const auto& s : selected.members) got.insert(s.objs[0]);
    CHECK(want == got);
}

TEST_CASE("environmental_selection picks the dominating solution at N = 1") {
    std::vector<Solution> chain{feasible_at({0.1, 0.1}), feasible_at({0.5, 0.5}),
                                feasible_at({0.9, 0.9})};
    const Population selected =
        environmental_selection(chain, 1, FitnessMode::constrained);
    REQUIRE(selected.size() == 1);
    CHECK(selected.members[0].objs[0] == doctest::Approx(0.1));
}

TEST_CASE("environmental_selection truncation drops the middle of three collinear") {
    std::vector<Solution> pool{feasible_at({0.0, 2.0}), feasible_at({1.0, 1.0}),
                               feasible_at({2.0, 0.0})};
    const Population selected =
        environmental_selection(pool, 2, FitnessMode::constrained);
    REQUIRE(selected.size() == 2);
    std::set<double> firsts;
    for (const auto& s : selected.members) firsts.insert(s.objs[0]);
    CHECK(firsts == std::set<double>{0.0, 2.0});
}

TEST_CASE("environmental_selection requires a pool of at least N") {
    CHECK_THROWS_AS(
        environmental_selection({feasible_at({0.0, 0.0})}, 2, FitnessMode::constrained),
        ContractViolation);
}

TEST_CASE("config validation enforces fraction ranges and pool floor") {
    EngineConfig config = small_config();
    config.llm_offspring_fraction = 0.6;
    CHECK_THROWS_AS(config.validate(), ContractViolation);
    config = small_config();
    config.llm_input_fraction = 0.05;  // ceil(0.05 * 20) = 1 < 2
    CHECK_THROWS_AS(config.validate(), ContractViolation);
    config = small_config();
    config.fe_max = 30;  // cannot even initialize 2N
    CHECK_THROWS_AS(config.validate(), ContractViolation);
    CHECK(small_config().llm_offspring_count() == 1);
    CHECK(small_config().llm_pool_size() == 4);

    EngineConfig default_scale;
    CHECK(default_scale.llm_offspring_count() == 5);  // round(0.05 * 100)
    CHECK(default_scale.llm_pool_size() == 10);       // ceil(0.10 * 100)
}

TEST_CASE("run keeps population sizes and budget invariants") {
    const auto problem = tric::make_problem(tric::TricId::tric2, 5);
    EngineConfig config = small_config();
    CountingBackend backend(1);
    std::size_t observed = 0;
    const RunResult result = engine::run(problem, config, backend, nullptr,
                                         [&](const GenerationRecord&) { ++observed; });
    CHECK(result.pop1.size() == config.population_size);
    CHECK(result.pop2.size() == config.population_size);
    CHECK(result.evaluations <= config.fe_max);
    CHECK(result.generations == result.history.size());
    CHECK(observed == result.generations);  // one observer record per generation
    // 1200 budget: 40 init + 29 * 40.
    CHECK(result.generations == 29);
    CHECK(result.evaluations == 1200);
    // Surrogate is healthy: one exchange per LLM offspring, 2 per generation.
    CHECK(result.exchanges.size() == 2 * result.generations);
    CHECK(backend.calls == result.exchanges.size());
}

TEST_CASE("llm fraction zero never touches the backend") {
    const auto problem = tric::make_problem(tric::TricId::tric2, 5);
    EngineConfig config = small_config();
    config.llm_offspring_fraction = 0.0;
    CountingBackend backend(1);
    const RunResult result = engine::run(problem, config, backend);
    CHECK(backend.calls == 0);
    CHECK(result.exchanges.empty());
    for (const auto& s : result.pop1.members) CHECK(s.provenance != Provenance::llm);
}

TEST_CASE("per-eval budget arithmetic stops at the documented bound") {
    const auto problem = tric::make_problem(tric::TricId::tric1, 5);
    EngineConfig config;
    config.population_size = 50;
    config.fe_max = 1000;
    config.llm_offspring_fraction = 0.0;
    config.seed = 3;
    llm::SurrogateBackend backend(1);
    const RunResult result = engine::run(problem, config, backend);
    // floor((1000 - 100) / 100) = 9 full generations.
    CHECK(result.generations == 9);
    CHECK(result.evaluations == 1000);
    CHECK(result.accounted_fe == 1000);
}

TEST_CASE("a generation that cannot afford its offspring is discarded whole") {
    const auto problem = tric::make_problem(tric::TricId::tric1, 5);
    EngineConfig config;
    config.population_size = 50;
    config.fe_max = 150;  // init takes 100, the first generation needs 100 more
    config.llm_offspring_fraction = 0.0;
    config.seed = 3;
    llm::SurrogateBackend backend(1);
    const RunResult result = engine::run(problem, config, backend);
    CHECK(result.generations == 0);
    CHECK(result.evaluations == 150);  // the aborted attempt still spent its evals
    CHECK(result.pop1.size() == 50);
    for (const auto& s : result.pop1.members) CHECK(s.provenance == Provenance::init);
}

TEST_CASE("per-generation accounting matches the loop-counter convention") {
    const auto problem = tric::make_problem(tric::TricId::tric1, 5);
    EngineConfig config;
    config.population_size = 50;
    config.fe_max = 300;
    config.llm_offspring_fraction = 0.0;
    config.fe_accounting = FeAccounting::per_generation_n;
    config.seed = 3;
    llm::SurrogateBackend backend(1);
    const RunResult result = engine::run(problem, config, backend);
    // Loop runs while accounted <= fe_max, charging N per generation:
    // generations happen at accounted = 0, 50, ..., 300 -> 7 of them.
    CHECK(result.generations == 7);
    CHECK(result.accounted_fe == 350);
    CHECK(result.evaluations == 100 + 7 * 100);  // true cost stays visible
}

TEST_CASE("identical seeds and a pure backend give bitwise-identical runs") {
    const auto problem = tric::make_problem(tric::TricId::tric2, 5);
    EngineConfig config = small_config();
    config.fe_max = 400;

    llm::SurrogateBackend b1(99), b2(99);
    const RunResult r1 = engine::run(problem, config, b1);
    const RunResult r2 = engine::run(problem, config, b2);
    REQUIRE(r1.pop1.size() == r2.pop1.size());
    for (std::size_t i = 0; i < r1.pop1.size(); ++i) {
        CHECK(r1.pop1.members[i].decs == r2.pop1.members[i].decs);
        CHECK(r1.pop1.members[i].objs == r2.pop1.members[i].objs);
        CHECK(r1.pop1.members[i].cv == r2.pop1.members[i].cv);
    }
    REQUIRE(r1.history.size() == r2.history.size());
    for (std::size_t g = 0; g < r1.history.size(); ++g) {
        CHECK(r1.history[g].feasible_count == r2.history[g].feasible_count);
        CHECK(r1.history[g].best_cv == r2.history[g].best_cv);
    }
}

TEST_CASE("a feasible nondominated union member survives constrained selection") {
    // One true-front solution among junk: it must be selected whenever the
    // nondominated count fits in N.
    const auto problem = tric::make_problem(tric::TricId::tric3, 10);
    BudgetCounter budget{0, 100};
    const Solution star =
        evaluate(problem, tric::tric3_preimage(0.5, 10), budget, Provenance::llm);
    REQUIRE(star.feasible());

    std::vector<Solution> pool{star};
    RandomSource rng(5);
    auto& stream = rng.stream("init");
    while (pool.size() < 30) {
        std::vector<double> x(10);
        for (double& v : x) v = uniform01(stream);
        pool.push_back(evaluate(problem, x, budget, Provenance::init));
    }
    const Population selected =
        environmental_selection(pool, 10, FitnessMode::constrained);
    bool found = false;
    for (const auto& s : selected.members)
        if (s.provenance == Provenance::llm && s.decs == star.decs) found = true;
    CHECK(found);
}

TEST_CASE("history carries metrics when a reference front is supplied") {
    const auto problem = tric::make_problem(tric::TricId::tric2, 5);
    EngineConfig config = small_config();
    config.fe_max = 200;
    MetricContext ctx{tric::sample_cpf(problem, 100), 1.1};
    llm::SurrogateBackend backend(1);
    const RunResult result = engine::run(problem, config, backend, &ctx);
    REQUIRE(!result.history.empty());
    for (const auto& rec : result.history) {
        REQUIRE(rec.igd_value.has_value());
        REQUIRE(rec.hv_value.has_value());
        if (rec.feasible_count > 0) {
            CHECK(!std::isnan(*rec.igd_value));
        } else {
            CHECK(std::isnan(*rec.igd_value));
        }
    }

    llm::SurrogateBackend backend2(1);
    const RunResult bare = engine::run(problem, config, backend2);
    for (const auto& rec : bare.history) CHECK_FALSE(rec.igd_value.has_value());
}

TEST_CASE("a partially pathological evaluator cannot crash the run") {
    // NaN objectives in a region: those solutions are poisoned to +inf and
    // lose every comparison, and the run completes at full size.
    ProblemDefinition problem;
    problem.name = "patchy";
    problem.n = 2;
    problem.m = 2;
    problem.q = 1;
    problem.l = 1;
    problem.lower = {0.0, 0.0};
    problem.upper = {1.0, 1.0};
    problem.evaluator = [](const std::vector<double>& x) {
        if (x[0] > 0.7)
            return EvalOutput{{std::nan(""), x[1]}, {x[1] - 0.5}};
        return EvalOutput{{x[0], 1.0 - x[0]}, {x[1] - 0.5}};
    };

    EngineConfig config = small_config();
    config.fe_max = 600;
    llm::SurrogateBackend backend(4);
    const RunResult result = engine::run(problem, config, backend);
    CHECK(result.pop1.size() == config.population_size);
    CHECK(result.pop2.size() == config.population_size);
    // Poisoned members never displace healthy ones from a full population.
    std::size_t poisoned = 0;
    for (const auto& s : result.pop1.members)
        if (!std::isfinite(s.objs[0])) ++poisoned;
    CHECK(poisoned == 0);
}

TEST_CASE("every population member carries a known provenance tag after a run") {
    const auto problem = tric::make_problem(tric::TricId::tric2, 5);
    EngineConfig config = small_config();
    config.fe_max = 400;
    llm::SurrogateBackend backend(1);
    const RunResult result = engine::run(problem, config, backend);
    std::set<Provenance> seen;
    for (const auto& pop : {result.pop1, result.pop2})
        for (const auto& s : pop.members) seen.insert(s.provenance);
    for (Provenance p : seen)
        CHECK((p == Provenance::init || p == Provenance::ga || p == Provenance::llm ||
               p == Provenance::fallback));
    CHECK(seen.count(Provenance::ga) == 1);  // GA offspring certainly survive somewhere
}
