#pragma once

#include <array>
#include <string>
#include <vector>

#include "cmoforge/core.hpp"
#include "cmoforge/rng.hpp"

namespace cmoforge::tric {

/// Self-contained constrained benchmark suite. All problems minimize over
/// x in [0,1]^n with base distance g(x) = 1 + sum_{i>=2} (x_i - 0.5)^2 and,
/// for the bi-objective members, f1 = x1 and f2 = g * (1 - sqrt(f1 / g)).
///
/// Constraint archetypes:
///   Type I   (diversity):   b - sin(a*pi*f1) <= 0 splits the front into arcs.
///   Type II  (feasibility): sum_{i>=2} (x_i - 0.5)^2 - rho <= 0 shrinks the
///                           feasible share of the search space.
///   Type III (convergence): e - sum(f) <= 0 pushes the attainable front away
///                           from the unconstrained one.
enum class TricId { tric1, tric2, tric3, tric4, tric5, tric6, tric7 };

inline constexpr std::array<TricId, 7> all_problems = {
    TricId::tric1, TricId::tric2, TricId::tric3, TricId::tric4,
    TricId::tric5, TricId::tric6, TricId::tric7};

std::string to_string(TricId id);
TricId parse_tric_id(const std::string& name);  // accepts "TRIC1".."TRIC7"

struct TricParams {
    double a = 10.0;    // Type I frequency
    double b = 0.5;     // Type I threshold
    double rho = 0.0;   // Type II radius^2, 0.0025 * (n - 1)
    double e = 0.0;     // Type III offset: 1.2 bi-objective, 1.3 tri-objective
    double r2 = 0.1;    // TRIC7 equality radius^2
    double delta = 1e-4;
};

TricParams params_for(TricId id, int n);
int default_dimension(TricId id);  // 10
int min_dimension(TricId id);      // 3 for TRIC6, else 2

ProblemDefinition make_problem(TricId id, int n);
ProblemDefinition make_problem(TricId id);  // default dimension

/// Parameter interval of one connected piece of a front curve.
struct FrontBand {
    double t_lo = 0.0;
    double t_hi = 1.0;
};

/// Connected parameter bands of the constrained front (bi-objective
/// problems only; for Type I constraints these are the five feasible arcs
/// [k/5 + 1/60, k/5 + 1/12]).
std::vector<FrontBand> cpf_parameter_bands(TricId id);

/// Front curve point for bi-objective problems at parameter t.
std::array<double, 2> cpf_curve_point(TricId id, double t);

/// Dense front polylines in objective space, one per connected band
/// (bi-objective problems only). Used for plotting.
std::vector<std::vector<std::array<double, 2>>> cpf_polylines(TricId id,
                                                              int points_per_band);

/// K evenly spread points on the analytic constrained front. For
/// disconnected fronts, points are allocated per band proportionally to arc
/// length with largest-remainder rounding. Errors if the problem carries no
/// front sampler.
std::vector<std::vector<double>> sample_cpf(const ProblemDefinition& problem, int k);

/// Monte Carlo estimate of the feasible fraction of the search box. Draws
/// from the "metrics" substream and never touches any evaluation budget.
double feasible_ratio_estimate(const ProblemDefinition& problem, int samples,
                               RandomSource& rng);

/// A decision vector that is feasible for the given problem.
std::vector<double> witness_point(TricId id, int n);

/// TRIC3 decision vector whose image lies on the constrained front at
/// parameter t (f1 = t, f1 + f2 = 1.2 + O(g_margin)). The margin keeps the
/// point strictly inside the feasible side against rounding.
std::vector<double> tric3_preimage(double t, int n, double g_margin = 1e-9);

}  // namespace cmoforge::tric
