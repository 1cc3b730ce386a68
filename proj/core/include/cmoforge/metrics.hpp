#pragma once

#include <cstdint>
#include <vector>

#include "cmoforge/core.hpp"

namespace cmoforge::metrics {

struct MetricReport {
    double igd = 0.0;  // NaN when no feasible member
    double hv = 0.0;   // NaN when no feasible member
    std::size_t feasible_count = 0;
    std::vector<double> ideal;
    std::vector<double> nadir;
    std::vector<double> reference_point;
};

/// Mean distance from each reference point to its nearest feasible member,
/// over raw (unnormalized) objectives. NaN when the population holds no
/// feasible solution.
double igd(const std::vector<std::vector<double>>& reference,
           const std::vector<Solution>& pop);

/// Hypervolume of the point set against the reference point: exact sweep for
/// m = 2, exact slicing for m = 3, Monte Carlo for m > 3. Points that do not
/// strictly dominate the reference point contribute nothing.
double hypervolume_points(const std::vector<std::vector<double>>& points,
                          const std::vector<double>& reference_point,
                          std::size_t mc_samples = 1'000'000,
                          std::uint64_t mc_seed = 0x5eedc0de5eedc0deull,
                          double* mc_stderr = nullptr);

/// Monte Carlo hypervolume estimate for any m >= 2: dominated fraction of
/// uniform samples in the box spanned by the point minima and the reference
/// point. The production estimator for m > 3 and the cross-check for the
/// exact sweeps.
double hypervolume_monte_carlo(const std::vector<std::vector<double>>& points,
                               const std::vector<double>& reference_point,
                               std::size_t samples, std::uint64_t seed,
                               double* stderr_out = nullptr);

/// Feasibility-gated hypervolume of a population's objectives (NaN when no
/// feasible member). Objectives are used as stored; normalize first when a
/// normalized indicator is wanted.
double hypervolume(const std::vector<Solution>& pop,
                   const std::vector<double>& reference_point,
                   std::size_t mc_samples = 1'000'000,
                   std::uint64_t mc_seed = 0x5eedc0de5eedc0deull,
                   double* mc_stderr = nullptr);

/// Componentwise (f - ideal) / (nadir - ideal).
std::vector<double> normalize(const std::vector<double>& objs,
                              const std::vector<double>& ideal,
                              const std::vector<double>& nadir);

/// Componentwise min / max of a reference front.
std::pair<std::vector<double>, std::vector<double>> front_extremes(
    const std::vector<std::vector<double>>& front);

/// IGD on raw objectives plus hypervolume on objectives normalized by the
/// reference front's extremes against the (hv_ref, ..., hv_ref) point.
MetricReport compute_report(const std::vector<Solution>& pop,
                            const std::vector<std::vector<double>>& reference_front,
                            double hv_ref = 1.1);

}  // namespace cmoforge::metrics
