#include "cmoforge/core.hpp"

#include <cmath>

namespace cmoforge {

bool ProblemDefinition::in_bounds(const std::vector<double>& decs) const {
    if (decs.size() != static_cast<std::size_t>(n)) return false;
    for (int i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(i);
        if (!(decs[j] >= lower[j] && decs[j] <= upper[j])) return false;
    }
    return true;
}

void ProblemDefinition::clamp(std::vector<double>& decs) const {
    for (int i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(i);
        decs[j] = std::min(std::max(decs[j], lower[j]), upper[j]);
    }
}

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::init: return "init";
        case Provenance::ga: return "ga";
        case Provenance::llm: return "llm";
        case Provenance::fallback: return "fallback";
    }
    return "init";
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "init") return Provenance::init;
    if (s == "ga") return Provenance::ga;
    if (s == "llm") return Provenance::llm;
    if (s == "fallback") return Provenance::fallback;
    throw ContractViolation("unknown provenance tag: " + s);
}

void BudgetCounter::charge() {
    if (fe >= fe_max) throw BudgetExhausted("function evaluation budget exhausted");
    ++fe;
}

double constraint_violation(const std::vector<double>& cons, int q, int l, double delta) {
    if (cons.size() != static_cast<std::size_t>(l))
        throw ContractViolation("constraint_violation: expected " + std::to_string(l) +
                                " constraint values, got " + std::to_string(cons.size()));
    if (!(delta >= 0.0)) throw ContractViolation("constraint_violation: delta must be >= 0");
    for (double c : cons)
        if (!std::isfinite(c)) return std::numeric_limits<double>::infinity();
    // Left-to-right accumulation, inequalities first, equalities last.
    double cv = 0.0;
    for (int i = 0; i < q; ++i) cv += std::max(0.0, cons[static_cast<std::size_t>(i)]);
    for (int i = q; i < l; ++i)
        cv += std::max(0.0, std::abs(cons[static_cast<std::size_t>(i)]) - delta);
    return cv;
}

bool pareto_dominates(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw ContractViolation("pareto_dominates: objective length mismatch");
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

CdpOrder cdp_compare(const Solution& a, const Solution& b) {
    const bool fa = a.feasible();
    const bool fb = b.feasible();
    if (fa != fb) return fa ? CdpOrder::a_better : CdpOrder::b_better;
    if (!fa) {
        if (a.cv < b.cv) return CdpOrder::a_better;
        if (b.cv < a.cv) return CdpOrder::b_better;
        return CdpOrder::tie;
    }
    if (pareto_dominates(a.objs, b.objs)) return CdpOrder::a_better;
    if (pareto_dominates(b.objs, a.objs)) return CdpOrder::b_better;
    return CdpOrder::tie;
}

Solution evaluate(const ProblemDefinition& problem, std::vector<double> decs,
                  BudgetCounter& budget, Provenance provenance) {
    if (!problem.in_bounds(decs))
        throw ContractViolation("evaluate: decision vector out of bounds for " + problem.name);
    budget.charge();
    EvalOutput out = problem.evaluator(decs);
    if (out.objectives.size() != static_cast<std::size_t>(problem.m) ||
        out.constraints.size() != static_cast<std::size_t>(problem.l))
        throw ContractViolation("evaluate: evaluator arity mismatch for " + problem.name);

    Solution s;
    s.decs = std::move(decs);
    s.objs = std::move(out.objectives);
    s.cons = std::move(out.constraints);
    s.provenance = provenance;

    bool finite = true;
    for (double v : s.objs)
        if (!std::isfinite(v)) finite = false;
    for (double v : s.cons)
        if (!std::isfinite(v)) finite = false;
    if (!finite) {
        // Poisoned: loses every comparison but keeps the run alive.
        const double inf = std::numeric_limits<double>::infinity();
        std::fill(s.objs.begin(), s.objs.end(), inf);
        s.cv = inf;
        return s;
    }
    s.cv = constraint_violation(s.cons, problem.q, problem.l, problem.delta);
    return s;
}

}  // namespace cmoforge
