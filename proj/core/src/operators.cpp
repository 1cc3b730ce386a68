#include "cmoforge/operators.hpp"

#include <cmath>

#include "cmoforge/core.hpp"
#include "cmoforge/rng.hpp"

namespace cmoforge::ga {

std::pair<double, double> sbx_children(double p1, double p2, double u, double eta_c) {
    double beta;
    if (u <= 0.5) {
        beta = std::pow(2.0 * u, 1.0 / (eta_c + 1.0));
    } else {
        beta = std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta_c + 1.0));
    }
    const double c1 = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2);
    const double c2 = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2);
    return {c1, c2};
}

double mutation_offset(double u, double eta_m) {
    if (u < 0.5) return std::pow(2.0 * u, 1.0 / (eta_m + 1.0)) - 1.0;
    return 1.0 - std::pow(2.0 * (1.0 - u), 1.0 / (eta_m + 1.0));
}

std::pair<std::vector<double>, std::vector<double>> sbx_crossover(
    const std::vector<double>& p1, const std::vector<double>& p2,
    const OperatorParams& params, const std::vector<double>& lower,
    const std::vector<double>& upper, std::mt19937_64& rng) {
    if (p1.size() != p2.size())
        throw ContractViolation("sbx_crossover: parent length mismatch");

    std::vector<double> c1 = p1;
    std::vector<double> c2 = p2;
    if (!(uniform01(rng) < params.pc)) return {std::move(c1), std::move(c2)};

    for (std::size_t i = 0; i < p1.size(); ++i) {
        if (uniform01(rng) < 0.5) {
            const double u = uniform01(rng);
            auto [a, b] = sbx_children(p1[i], p2[i], u, params.eta_c);
            c1[i] = std::min(std::max(a, lower[i]), upper[i]);
            c2[i] = std::min(std::max(b, lower[i]), upper[i]);
        }
    }
    return {std::move(c1), std::move(c2)};
}

std::vector<double> polynomial_mutation(std::vector<double> decs,
                                        const OperatorParams& params,
                                        const std::vector<double>& lower,
                                        const std::vector<double>& upper,
                                        std::mt19937_64& rng) {
    const double pm = params.resolved_pm(decs.size());
    for (std::size_t i = 0; i < decs.size(); ++i) {
        if (uniform01(rng) < pm) {
            const double u = uniform01(rng);
            const double delta = mutation_offset(u, params.eta_m);
            const double x = decs[i] + delta * (upper[i] - lower[i]);
            decs[i] = std::min(std::max(x, lower[i]), upper[i]);
        }
    }
    return decs;
}

std::vector<std::size_t> binary_tournament(std::size_t pop_size,
                                           const std::vector<double>& fitness,
                                           std::size_t k, std::mt19937_64& rng) {
    if (pop_size < 2) throw ContractViolation("binary_tournament: need at least 2 members");
    if (fitness.size() != pop_size)
        throw ContractViolation("binary_tournament: fitness size mismatch");

    std::vector<std::size_t> winners;
    winners.reserve(k);
    for (std::size_t t = 0; t < k; ++t) {
        const std::size_t a = uniform_index(rng, pop_size);
        std::size_t b = uniform_index(rng, pop_size - 1);
        if (b >= a) ++b;
        if (fitness[a] < fitness[b]) {
            winners.push_back(a);
        } else if (fitness[b] < fitness[a]) {
            winners.push_back(b);
        } else {
            winners.push_back(uniform01(rng) < 0.5 ? a : b);
        }
    }
    return winners;
}

}  // namespace cmoforge::ga
