#define CMOFORGE_ENABLE_CV_ABSDIFF_FORM
#include "cmoforge/core.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "cmoforge/problems.hpp"
#include "cmoforge/rng.hpp"

using namespace cmoforge;

namespace {

// Independent oracle: same mandated left-to-right order, different code path.
double cv_oracle(const std::vector<double>& g, const std::vector<double>& h,
                 double delta) {
    double total = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] > 0.0) total += g[i];
    }
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double excess = (h[i] < 0.0 ? -h[i] : h[i]) - delta;
        if (excess > 0.0) total += excess;
    }
    return total;
}

ProblemDefinition toy_problem() {
    ProblemDefinition p;
    p.name = "toy";
    p.n = 2;
    p.m = 2;
    p.q = 1;
    p.l = 1;
    p.lower = {0.0, 0.0};
    p.upper = {1.0, 1.0};
    p.evaluator = [](const std::vector<double>& x) {
        return EvalOutput{{x[0], 1.0 - x[0]}, {x[1] - 0.75}};
    };
    return p;
}

}  // namespace

TEST_CASE("constraint_violation worked examples") {
    CHECK(constraint_violation({-1.0, 0.0}, 2, 2, 1e-4) == 0.0);
    CHECK(constraint_violation({0.5, -1.0}, 2, 2, 1e-4) == 0.5);
    CHECK(constraint_violation({0.3}, 0, 1, 1e-4) ==
          doctest::Approx(0.2999).epsilon(1e-12));
}

TEST_CASE("constraint_violation matches the brute-force oracle exactly") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const int q = static_cast<int>(rng() % 5);
        const int eq = static_cast<int>(rng() % 4);
        const double delta = uniform01(rng) * 0.01;
        std::vector<double> g, h, cons;
        for (int i = 0; i < q; ++i) g.push_back(uniform01(rng) * 4.0 - 2.0);
        for (int i = 0; i < eq; ++i) h.push_back(uniform01(rng) * 4.0 - 2.0);
        cons = g;
        cons.insert(cons.end(), h.begin(), h.end());
        CHECK(constraint_violation(cons, q, q + eq, delta) == cv_oracle(g, h, delta));
    }
}

TEST_CASE("constraint_violation is zero iff every constraint is satisfied") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const double delta = uniform01(rng) * 0.01;
        const double g = uniform01(rng) * 2.0 - 1.0;
        const double h = uniform01(rng) * 2.0 - 1.0;
        const double cv = constraint_violation({g, h}, 1, 2, delta);
        const bool satisfied = g <= 0.0 && std::abs(h) <= delta;
        CHECK((cv == 0.0) == satisfied);
        CHECK(cv >= 0.0);
    }
}

TEST_CASE("constraint_violation is monotone in each breach") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 500; ++trial) {
        const double delta = 1e-3;
        std::vector<double> cons = {uniform01(rng), uniform01(rng) - 0.5};
        const double base = constraint_violation(cons, 1, 2, delta);
        std::vector<double> worse = cons;
        worse[0] += uniform01(rng);  // raise an already-positive g
        CHECK(constraint_violation(worse, 1, 2, delta) >= base);
        worse = cons;
        worse[1] = worse[1] >= 0 ? worse[1] + uniform01(rng) : worse[1] - uniform01(rng);
        CHECK(constraint_violation(worse, 1, 2, delta) >= base);
    }
}

TEST_CASE("non-finite constraint values poison the violation to +inf") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(constraint_violation({std::nan("")}, 1, 1, 0.0) == inf);
    CHECK(constraint_violation({-1.0, inf}, 2, 2, 0.0) == inf);
}

TEST_CASE("absdiff relaxation variant is positive even for exact equalities") {
    // An exactly satisfied equality still scores delta under the alternate
    // ordering, which is why the standard form is the production one.
    CHECK(constraint_violation({0.0}, 0, 1, 1e-4) == 0.0);
    CHECK(constraint_violation_absdiff({0.0}, 0, 1, 1e-4) == doctest::Approx(1e-4));
}

TEST_CASE("pareto_dominates worked examples") {
    CHECK(pareto_dominates({0.0, 0.0}, {1.0, 1.0}));
    CHECK_FALSE(pareto_dominates({0.0, 1.0}, {1.0, 0.0}));
    CHECK_FALSE(pareto_dominates({0.3, 0.7}, {0.3, 0.7}));  // irreflexive
    CHECK_THROWS_AS(pareto_dominates({0.0}, {1.0, 1.0}), ContractViolation);
}

TEST_CASE("pareto_dominates is a strict partial order on random vectors") {
    std::mt19937_64 rng(17);
    const auto random_vec = [&] {
        std::vector<double> v(3);
        for (double& x : v) x = std::floor(uniform01(rng) * 4.0);  // ties likely
        return v;
    };
    for (int trial = 0; trial < 2000; ++trial) {
        const auto a = random_vec();
        const auto b = random_vec();
        const auto c = random_vec();
        CHECK_FALSE(pareto_dominates(a, a));
        if (pareto_dominates(a, b)) CHECK_FALSE(pareto_dominates(b, a));
        if (pareto_dominates(a, b) && pareto_dominates(b, c))
            CHECK(pareto_dominates(a, c));
    }
}

TEST_CASE("cdp_compare worked examples and consistency") {
    Solution a, b;
    a.objs = {0.0, 1.0};
    b.objs = {1.0, 0.0};

    a.cv = 0.0;
    b.cv = 0.2;
    CHECK(cdp_compare(a, b) == CdpOrder::a_better);

    a.cv = 0.1;
    b.cv = 0.2;
    CHECK(cdp_compare(a, b) == CdpOrder::a_better);

    a.cv = 0.0;
    b.cv = 0.0;
    CHECK(cdp_compare(a, b) == CdpOrder::tie);

    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 1000; ++trial) {
        Solution x, y;
        x.cv = uniform01(rng) < 0.5 ? 0.0 : uniform01(rng);
        y.cv = uniform01(rng) < 0.5 ? 0.0 : uniform01(rng);
        x.objs = {uniform01(rng), uniform01(rng)};
        y.objs = {uniform01(rng), uniform01(rng)};
        const CdpOrder xy = cdp_compare(x, y);
        const CdpOrder yx = cdp_compare(y, x);
        if (xy == CdpOrder::a_better) CHECK(yx == CdpOrder::b_better);
        if (xy == CdpOrder::b_better) CHECK(yx == CdpOrder::a_better);
        if (xy == CdpOrder::tie) CHECK(yx == CdpOrder::tie);
    }
}

TEST_CASE("evaluate charges exactly one evaluation") {
    const ProblemDefinition p = toy_problem();
    BudgetCounter budget{0, 10};
    const Solution s = evaluate(p, {0.4, 0.2}, budget, Provenance::init);
    CHECK(budget.fe == 1);
    CHECK(s.objs == std::vector<double>{0.4, 0.6});
    CHECK(s.cv == 0.0);
    CHECK(s.feasible());
}

TEST_CASE("evaluate on TRIC2(n=2) at (0.3, 0.5) is feasible") {
    const ProblemDefinition p = tric::make_problem(tric::TricId::tric2, 2);
    BudgetCounter budget{0, 1};
    const Solution s = evaluate(p, {0.3, 0.5}, budget, Provenance::init);
    CHECK(s.cv == 0.0);
    CHECK(s.cons[0] < 0.0);  // -rho
}

TEST_CASE("evaluate refuses a spent budget and out-of-bounds input") {
    const ProblemDefinition p = toy_problem();
    BudgetCounter spent{5, 5};
    CHECK_THROWS_AS(evaluate(p, {0.5, 0.5}, spent, Provenance::init), BudgetExhausted);
    CHECK(spent.fe == 5);

    BudgetCounter fresh{0, 5};
    CHECK_THROWS_AS(evaluate(p, {1.5, 0.5}, fresh, Provenance::init), ContractViolation);
    CHECK(fresh.fe == 0);
}

TEST_CASE("evaluate poisons non-finite evaluator output") {
    ProblemDefinition p = toy_problem();
    p.evaluator = [](const std::vector<double>& x) {
        return EvalOutput{{std::nan(""), x[0]}, {0.0}};
    };
    BudgetCounter budget{0, 5};
    const Solution s = evaluate(p, {0.5, 0.5}, budget, Provenance::ga);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(s.cv == inf);
    CHECK(s.objs == std::vector<double>{inf, inf});
    CHECK_FALSE(s.feasible());
    // A poisoned solution loses to any finite-violation one.
    Solution other;
    other.cv = 100.0;
    other.objs = {1.0, 1.0};
    CHECK(cdp_compare(other, s) == CdpOrder::a_better);
}

TEST_CASE("RandomSource substreams are reproducible and independent") {
    RandomSource a(42), b(42);
    auto& a_sbx = a.stream("sbx");
    auto& b_sbx = b.stream("sbx");
    for (int i = 0; i < 16; ++i) CHECK(a_sbx() == b_sbx());

    // Draining one substream leaves another untouched.
    RandomSource c(42), d(42);
    for (int i = 0; i < 100; ++i) c.stream("mutation")();
    for (int i = 0; i < 16; ++i) CHECK(c.stream("sbx")() == d.stream("sbx")());

    CHECK(a.stream("init")() != a.stream("mating")());
}

TEST_CASE("derived run seeds differ across the grid") {
    const auto s1 = RandomSource::derive(1, "TRIC1", "ccmo", 0);
    CHECK(s1 == RandomSource::derive(1, "TRIC1", "ccmo", 0));
    CHECK(s1 != RandomSource::derive(1, "TRIC1", "ccmo", 1));
    CHECK(s1 != RandomSource::derive(1, "TRIC2", "ccmo", 0));
    CHECK(s1 != RandomSource::derive(1, "TRIC1", "ccmo-llm", 0));
    CHECK(s1 != RandomSource::derive(2, "TRIC1", "ccmo", 0));
}

TEST_CASE("sample_without_replacement draws distinct in-range indices") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 20;
        const std::size_t k = 1 + rng() % n;
        const auto idx = sample_without_replacement(rng, k, n);
        CHECK(idx.size() == k);
        std::set<std::size_t> seen(idx.begin(), idx.end());
        CHECK(seen.size() == k);
        for (std::size_t i : idx) CHECK(i < n);
    }
}
