#include "cmoforge/problems.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

#include "cmoforge/core.hpp"
#include "cmoforge/rng.hpp"

using namespace cmoforge;
using tric::TricId;

namespace {

Solution eval_free(const ProblemDefinition& p, const std::vector<double>& x) {
    BudgetCounter budget{0, 1};
    return evaluate(p, x, budget, Provenance::init);
}

std::vector<double> padded(double x1, int n, double rest = 0.5) {
    std::vector<double> x(static_cast<std::size_t>(n), rest);
    x[0] = x1;
    return x;
}

bool mutually_nondominated(const std::vector<std::vector<double>>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (i != j && pareto_dominates(pts[i], pts[j])) return false;
    return true;
}

}  // namespace

TEST_CASE("TRIC1 hand-evaluated points") {
    const auto p = tric::make_problem(TricId::tric1);
    const Solution in_band = eval_free(p, padded(0.075, p.n));
    CHECK(in_band.objs[0] == doctest::Approx(0.075));
    CHECK(in_band.objs[1] == doctest::Approx(1.0 - std::sqrt(0.075)).epsilon(1e-12));
    CHECK(in_band.cv == 0.0);

    const Solution out_band = eval_free(p, padded(0.175, p.n));
    CHECK(out_band.cv == doctest::Approx(0.5 + std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("TRIC3 hand-evaluated point") {
    const auto p = tric::make_problem(TricId::tric3);
    const Solution s = eval_free(p, padded(0.25, p.n));
    CHECK(s.objs[0] == doctest::Approx(0.25));
    CHECK(s.objs[1] == doctest::Approx(0.5));
    CHECK(s.cv == doctest::Approx(0.45).epsilon(1e-12));
}

TEST_CASE("every problem's witness point is feasible") {
    for (TricId id : tric::all_problems) {
        for (int n : {tric::min_dimension(id), tric::default_dimension(id)}) {
            const auto p = tric::make_problem(id, n);
            const auto witness = tric::witness_point(id, n);
            REQUIRE(p.in_bounds(witness));
            const Solution s = eval_free(p, witness);
            INFO(p.name << " n=" << n);
            CHECK(s.cv == 0.0);
        }
    }
}

TEST_CASE("TRIC3 front parameter is attainable everywhere") {
    const int n = 10;
    const auto p = tric::make_problem(TricId::tric3, n);
    for (int i = 0; i <= 100; ++i) {
        const double t = i / 100.0;
        const auto x = tric::tric3_preimage(t, n);
        REQUIRE(p.in_bounds(x));
        const Solution s = eval_free(p, x);
        INFO("t = " << t);
        CHECK(s.cv == 0.0);
        CHECK(s.objs[0] == doctest::Approx(t));
        CHECK(s.objs[0] + s.objs[1] == doctest::Approx(1.2).epsilon(1e-8));
    }
}

TEST_CASE("sample_cpf worked examples") {
    const auto tric3 = tric::make_problem(TricId::tric3);
    const auto two = tric::sample_cpf(tric3, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0][0] == doctest::Approx(0.0));
    CHECK(two[0][1] == doctest::Approx(1.2));
    CHECK(two[1][0] == doctest::Approx(1.0));
    CHECK(two[1][1] == doctest::Approx(0.2));

    const auto tric2 = tric::make_problem(TricId::tric2);
    const auto three = tric::sample_cpf(tric2, 3);
    REQUIRE(three.size() == 3);
    CHECK(three[0][0] == doctest::Approx(0.0));
    CHECK(three[0][1] == doctest::Approx(1.0));
    CHECK(three[1][0] == doctest::Approx(0.5));
    CHECK(three[1][1] == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-12));
    CHECK(three[2][0] == doctest::Approx(1.0));
    CHECK(three[2][1] == doctest::Approx(0.0));
}

TEST_CASE("sample_cpf returns mutually nondominated points on every problem") {
    for (TricId id : tric::all_problems) {
        const auto p = tric::make_problem(id);
        const auto pts = tric::sample_cpf(p, 100);
        REQUIRE(pts.size() == 100);
        INFO(p.name);
        CHECK(mutually_nondominated(pts));
    }
}

TEST_CASE("arc-banded fronts only sample inside the feasible bands") {
    for (TricId id : {TricId::tric1, TricId::tric4, TricId::tric5}) {
        const auto p = tric::make_problem(id);
        for (const auto& pt : tric::sample_cpf(p, 73)) {
            INFO(p.name << " f1 = " << pt[0]);
            CHECK(std::sin(10.0 * 3.14159265358979323846 * pt[0]) >= 0.5 - 1e-12);
        }
    }
}

TEST_CASE("band allocation spreads points across all five arcs") {
    const auto p = tric::make_problem(TricId::tric1);
    const auto pts = tric::sample_cpf(p, 47);
    REQUIRE(pts.size() == 47);
    const auto bands = tric::cpf_parameter_bands(TricId::tric1);
    std::vector<int> counts(bands.size(), 0);
    for (const auto& pt : pts) {
        for (std::size_t b = 0; b < bands.size(); ++b)
            if (pt[0] >= bands[b].t_lo - 1e-12 && pt[0] <= bands[b].t_hi + 1e-12)
                ++counts[b];
    }
    int total = 0;
    for (int c : counts) {
        CHECK(c >= 5);  // 47 over five arcs, lengths differ near the f1 = 0 end
        total += c;
    }
    CHECK(total == 47);
}

TEST_CASE("TRIC1 band endpoints match the constraint boundary found by bisection") {
    const auto p = tric::make_problem(TricId::tric1);
    const auto constraint_at = [&](double t) {
        return eval_free(p, padded(t, p.n)).cons[0];
    };
    for (const auto& band : tric::cpf_parameter_bands(TricId::tric1)) {
        // The constraint must change sign at each analytic endpoint.
        for (double endpoint : {band.t_lo, band.t_hi}) {
            double lo = endpoint - 1e-3;
            double hi = endpoint + 1e-3;
            REQUIRE(constraint_at(lo) * constraint_at(hi) < 0.0);
            for (int iter = 0; iter < 60; ++iter) {
                const double mid = 0.5 * (lo + hi);
                if (constraint_at(lo) * constraint_at(mid) <= 0.0) hi = mid;
                else lo = mid;
            }
            CHECK(std::abs(0.5 * (lo + hi) - endpoint) < 1e-9);
        }
    }
}

TEST_CASE("TRIC6 samples lie on the sphere-or-plane front") {
    const auto p = tric::make_problem(TricId::tric6);
    const auto pts = tric::sample_cpf(p, 200);
    for (const auto& pt : pts) {
        const double sum = pt[0] + pt[1] + pt[2];
        const double norm = std::sqrt(pt[0] * pt[0] + pt[1] * pt[1] + pt[2] * pt[2]);
        const bool on_sphere = std::abs(norm - 1.0) < 1e-9 && sum >= 1.3 - 1e-9;
        const bool on_plane = std::abs(sum - 1.3) < 1e-9 && norm >= 1.0 - 1e-9;
        CHECK((on_sphere || on_plane));
    }
}

TEST_CASE("TRIC7 front curve follows the pinned-shell objective") {
    for (double t : {0.0, 0.3, 1.0}) {
        const auto f = tric::cpf_curve_point(TricId::tric7, t);
        CHECK(f[1] == doctest::Approx(1.1 - std::sqrt(1.1 * t)).epsilon(1e-12));
    }
}

TEST_CASE("feasible ratio estimates") {
    RandomSource rng(99);
    const auto tric2 = tric::make_problem(TricId::tric2, 2);
    const double ratio = tric::feasible_ratio_estimate(tric2, 100000, rng);
    // Analytic ratio 2*sqrt(rho) = 0.1; allow 3 binomial sigma.
    const double sigma = std::sqrt(0.1 * 0.9 / 100000.0);
    CHECK(std::abs(ratio - 0.1) <= 3.0 * sigma);

    // Removing the equality relaxation leaves a measure-zero feasible set.
    auto tric7 = tric::make_problem(TricId::tric7, 5);
    tric7.delta = 0.0;
    RandomSource rng2(100);
    CHECK(tric::feasible_ratio_estimate(tric7, 20000, rng2) == 0.0);

    // A constraint-free problem is feasible everywhere.
    ProblemDefinition free;
    free.name = "free";
    free.n = 2;
    free.m = 2;
    free.q = 0;
    free.l = 0;
    free.lower = {0.0, 0.0};
    free.upper = {1.0, 1.0};
    free.evaluator = [](const std::vector<double>& x) {
        return EvalOutput{{x[0], x[1]}, {}};
    };
    RandomSource rng3(101);
    CHECK(tric::feasible_ratio_estimate(free, 1000, rng3) == 1.0);
}

TEST_CASE("evaluators are pure: equal input, bitwise-equal output") {
    RandomSource rng(7);
    auto& stream = rng.stream("metrics");
    for (TricId id : tric::all_problems) {
        const auto p = tric::make_problem(id);
        std::vector<double> x(static_cast<std::size_t>(p.n));
        for (double& v : x) v = uniform01(stream);
        const EvalOutput a = p.evaluator(x);
        const EvalOutput b = p.evaluator(x);
        CHECK(std::memcmp(a.objectives.data(), b.objectives.data(),
                          a.objectives.size() * sizeof(double)) == 0);
        CHECK(std::memcmp(a.constraints.data(), b.constraints.data(),
                          a.constraints.size() * sizeof(double)) == 0);
    }
}

TEST_CASE("make_problem rejects bad inputs") {
    CHECK_THROWS_AS(tric::parse_tric_id("TRIC9"), ContractViolation);
    CHECK_THROWS_AS(tric::make_problem(TricId::tric1, 1), ContractViolation);
    CHECK_THROWS_AS(tric::make_problem(TricId::tric6, 2), ContractViolation);
    CHECK_THROWS_AS(tric::make_problem(TricId::tric5, 2), ContractViolation);
    CHECK_THROWS_AS(
        tric::sample_cpf(tric::make_problem(TricId::tric1), 1), ContractViolation);
}

TEST_CASE("constraint counts and ordering per problem") {
    const auto t4 = tric::make_problem(TricId::tric4);
    CHECK(t4.q == 2);
    CHECK(t4.l == 2);
    const auto t7 = tric::make_problem(TricId::tric7);
    CHECK(t7.q == 0);
    CHECK(t7.l == 1);
    CHECK(t7.delta == 1e-4);
    const auto t6 = tric::make_problem(TricId::tric6);
    CHECK(t6.m == 3);
}
