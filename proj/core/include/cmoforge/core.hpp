#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmoforge {

/// Violation of a documented pre-condition by the caller.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Raised by evaluate() when the evaluation budget is spent.
class BudgetExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EvalOutput {
    std::vector<double> objectives;
    std::vector<double> constraints;
};

/// A box-constrained minimization problem with q inequality constraints
/// (value <= 0 means satisfied) followed by l - q equality constraints
/// (|value| <= delta means satisfied).
struct ProblemDefinition {
    std::string name;
    int n = 0;  // decision dimension
    int m = 0;  // objective count
    int q = 0;  // inequality constraints
    int l = 0;  // total constraints (equalities are the last l - q)
    std::vector<double> lower;
    std::vector<double> upper;
    double delta = 1e-4;  // equality relaxation
    std::function<EvalOutput(const std::vector<double>&)> evaluator;
    // Optional: K evenly spread points on the analytic constrained front.
    std::function<std::vector<std::vector<double>>(int)> cpf_sampler;

    bool has_cpf() const { return static_cast<bool>(cpf_sampler); }
    bool in_bounds(const std::vector<double>& decs) const;
    void clamp(std::vector<double>& decs) const;
};

enum class Provenance { init, ga, llm, fallback };

const char* to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct Solution {
    std::vector<double> decs;
    std::vector<double> objs;
    std::vector<double> cons;
    double cv = 0.0;
    Provenance provenance = Provenance::init;

    bool feasible() const { return cv == 0.0; }
};

/// Ordered multiset of solutions with a fixed target size N.
struct Population {
    std::vector<Solution> members;
    std::size_t capacity = 0;

    std::size_t size() const { return members.size(); }
};

struct BudgetCounter {
    std::uint64_t fe = 0;
    std::uint64_t fe_max = 0;

    bool exhausted() const { return fe >= fe_max; }
    std::uint64_t remaining() const { return fe_max > fe ? fe_max - fe : 0; }
    void charge();  // throws BudgetExhausted when fe == fe_max
};

/// Aggregate constraint violation: sum of max(0, g_i) over the q inequality
/// values plus max(0, |h_i| - delta) over the remaining equality values,
/// accumulated left to right. Any non-finite input poisons the result to +inf.
double constraint_violation(const std::vector<double>& cons, int q, int l, double delta);

#ifdef CMOFORGE_ENABLE_CV_ABSDIFF_FORM
// Variant applying the relaxation inside the absolute value,
// max(0, |h - delta|); strictly positive for exactly satisfied equalities.
// Retained only for side-by-side comparison in tests.
inline double constraint_violation_absdiff(const std::vector<double>& cons, int q, int l,
                                           double delta) {
    double cv = 0.0;
    for (int i = 0; i < q; ++i) cv += std::max(0.0, cons[static_cast<std::size_t>(i)]);
    for (int i = q; i < l; ++i)
        cv += std::max(0.0, std::abs(cons[static_cast<std::size_t>(i)] - delta));
    return cv;
}
#endif

/// Strict Pareto dominance for minimization: a <= b everywhere, < somewhere.
bool pareto_dominates(const std::vector<double>& a, const std::vector<double>& b);

enum class CdpOrder { a_better, b_better, tie };

/// Constrained dominance: feasible beats infeasible, lower violation beats
/// higher, Pareto dominance decides between two feasible solutions.
CdpOrder cdp_compare(const Solution& a, const Solution& b);

/// Runs the problem evaluator, charging exactly one function evaluation.
/// Non-finite evaluator output poisons the solution (objs and cv set to +inf)
/// so it loses every comparison instead of crashing the run.
Solution evaluate(const ProblemDefinition& problem, std::vector<double> decs,
                  BudgetCounter& budget, Provenance provenance);

}  // namespace cmoforge
