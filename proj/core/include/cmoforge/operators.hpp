#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace cmoforge::ga {

struct OperatorParams {
    double pc = 1.0;       // whole-pair crossover probability
    double eta_c = 20.0;   // SBX distribution index
    std::optional<double> pm;  // per-variable mutation probability; unset -> 1/n
    double eta_m = 20.0;   // mutation distribution index

    double resolved_pm(std::size_t n) const {
        return pm ? *pm : 1.0 / static_cast<double>(n);
    }
};

/// Spread-factor recombination of one variable pair for a given u in [0, 1).
/// Pure math core of SBX, exposed for direct verification.
std::pair<double, double> sbx_children(double p1, double p2, double u, double eta_c);

/// Polynomial-mutation offset delta in (-1, 1) for a given u in [0, 1).
double mutation_offset(double u, double eta_m);

/// Simulated binary crossover. Per variable, recombination applies with
/// probability 0.5, otherwise the parent values are copied; the whole pair is
/// skipped with probability 1 - pc. Children are clamped to the bounds.
std::pair<std::vector<double>, std::vector<double>> sbx_crossover(
    const std::vector<double>& p1, const std::vector<double>& p2,
    const OperatorParams& params, const std::vector<double>& lower,
    const std::vector<double>& upper, std::mt19937_64& rng);

/// Polynomial mutation: each variable mutates with probability pm by
/// delta * (upper - lower), clamped to the bounds.
std::vector<double> polynomial_mutation(std::vector<double> decs,
                                        const OperatorParams& params,
                                        const std::vector<double>& lower,
                                        const std::vector<double>& upper,
                                        std::mt19937_64& rng);

/// k independent binary tournaments over [0, pop_size): each draws two
/// distinct members uniformly and keeps the one with smaller fitness,
/// breaking ties uniformly at random. Returns winner indices.
std::vector<std::size_t> binary_tournament(std::size_t pop_size,
                                           const std::vector<double>& fitness,
                                           std::size_t k, std::mt19937_64& rng);

}  // namespace cmoforge::ga
