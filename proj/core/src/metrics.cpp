#include "cmoforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cmoforge/rng.hpp"

namespace cmoforge::metrics {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

bool strictly_dominates_ref(const std::vector<double>& p, const std::vector<double>& ref) {
    for (std::size_t i = 0; i < ref.size(); ++i)
        if (!(p[i] < ref[i])) return false;
    return true;
}

// Sweep for m = 2: points sorted by f1, rectangles against the shrinking f2.
double hv2d(std::vector<std::vector<double>> pts, double r1, double r2) {
    std::erase_if(pts, [&](const auto& p) { return !(p[0] < r1 && p[1] < r2); });
    if (pts.empty()) return 0.0;
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        if (a[0] != b[0]) return a[0] < b[0];
        return a[1] < b[1];
    });
    double hv = 0.0;
    double best_f2 = r2;
    for (const auto& p : pts) {
        if (p[1] < best_f2) {
            hv += (r1 - p[0]) * (best_f2 - p[1]);
            best_f2 = p[1];
        }
    }
    return hv;
}

// Slicing for m = 3: between consecutive f3 levels the dominated area is the
// 2-D hypervolume of the points at or below the slab floor. Dominated points
// are dropped first so they cannot perturb the slab partition (the result
// must be bit-identical with or without them).
double hv3d(std::vector<std::vector<double>> pts, const std::vector<double>& ref) {
    std::erase_if(pts, [&](const auto& p) { return !strictly_dominates_ref(p, ref); });
    std::vector<std::vector<double>> kept;
    for (const auto& p : pts) {
        bool dominated = false;
        for (const auto& q : pts) {
            if (&q == &p) continue;
            bool leq = true, strict = false;
            for (std::size_t i = 0; i < 3; ++i) {
                if (q[i] > p[i]) { leq = false; break; }
                if (q[i] < p[i]) strict = true;
            }
            if (leq && strict) { dominated = true; break; }
        }
        if (!dominated) kept.push_back(p);
    }
    pts = std::move(kept);
    if (pts.empty()) return 0.0;
    std::vector<double> levels;
    levels.reserve(pts.size() + 1);
    for (const auto& p : pts) levels.push_back(p[2]);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    levels.push_back(ref[2]);

    double hv = 0.0;
    for (std::size_t j = 0; j + 1 < levels.size(); ++j) {
        const double z_lo = levels[j];
        const double z_hi = levels[j + 1];
        std::vector<std::vector<double>> active;
        for (const auto& p : pts)
            if (p[2] <= z_lo) active.push_back({p[0], p[1]});
        hv += hv2d(std::move(active), ref[0], ref[1]) * (z_hi - z_lo);
    }
    return hv;
}

double hv_monte_carlo(const std::vector<std::vector<double>>& pts,
                      const std::vector<double>& ref, std::size_t samples,
                      std::uint64_t seed, double* stderr_out) {
    std::vector<std::vector<double>> inside;
    for (const auto& p : pts)
        if (strictly_dominates_ref(p, ref)) inside.push_back(p);
    if (inside.empty()) {
        if (stderr_out) *stderr_out = 0.0;
        return 0.0;
    }
    const std::size_t m = ref.size();
    std::vector<double> lo(m, std::numeric_limits<double>::infinity());
    for (const auto& p : inside)
        for (std::size_t i = 0; i < m; ++i) lo[i] = std::min(lo[i], p[i]);
    double box = 1.0;
    for (std::size_t i = 0; i < m; ++i) box *= ref[i] - lo[i];

    std::mt19937_64 rng(seed);
    std::vector<double> y(m);
    std::size_t hit = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < m; ++i)
            y[i] = lo[i] + uniform01(rng) * (ref[i] - lo[i]);
        for (const auto& p : inside) {
            bool dom = true;
            for (std::size_t i = 0; i < m; ++i)
                if (p[i] > y[i]) { dom = false; break; }
            if (dom) { ++hit; break; }
        }
    }
    const double frac = static_cast<double>(hit) / static_cast<double>(samples);
    if (stderr_out)
        *stderr_out = box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples));
    return frac * box;
}

}  // namespace

double igd(const std::vector<std::vector<double>>& reference,
           const std::vector<Solution>& pop) {
    if (reference.empty()) throw ContractViolation("igd: empty reference set");
    std::vector<const std::vector<double>*> feasible;
    for (const auto& s : pop)
        if (s.feasible()) feasible.push_back(&s.objs);
    if (feasible.empty()) return kNaN;

    const std::size_t m = reference.front().size();
    double total = 0.0;
    for (const auto& r : reference) {
        if (r.size() != m) throw ContractViolation("igd: ragged reference set");
        double best = std::numeric_limits<double>::infinity();
        for (const auto* p : feasible) {
            if (p->size() != m)
                throw ContractViolation("igd: objective dimension mismatch");
            double d2 = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double d = r[i] - (*p)[i];
                d2 += d * d;
            }
            best = std::min(best, d2);
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(reference.size());
}

double hypervolume_monte_carlo(const std::vector<std::vector<double>>& points,
                               const std::vector<double>& reference_point,
                               std::size_t samples, std::uint64_t seed,
                               double* stderr_out) {
    for (const auto& p : points)
        if (p.size() != reference_point.size())
            throw ContractViolation("hypervolume: objective dimension mismatch");
    return hv_monte_carlo(points, reference_point, samples, seed, stderr_out);
}

double hypervolume_points(const std::vector<std::vector<double>>& points,
                          const std::vector<double>& reference_point,
                          std::size_t mc_samples, std::uint64_t mc_seed,
                          double* mc_stderr) {
    const std::size_t m = reference_point.size();
    for (const auto& p : points)
        if (p.size() != m)
            throw ContractViolation("hypervolume: objective dimension mismatch");
    if (mc_stderr) *mc_stderr = 0.0;
    if (m == 2) {
        std::vector<std::vector<double>> pts(points.begin(), points.end());
        return hv2d(std::move(pts), reference_point[0], reference_point[1]);
    }
    if (m == 3) {
        std::vector<std::vector<double>> pts(points.begin(), points.end());
        return hv3d(std::move(pts), reference_point);
    }
    if (m < 2) throw ContractViolation("hypervolume: need at least 2 objectives");
    return hv_monte_carlo(points, reference_point, mc_samples, mc_seed, mc_stderr);
}

double hypervolume(const std::vector<Solution>& pop,
                   const std::vector<double>& reference_point,
                   std::size_t mc_samples, std::uint64_t mc_seed, double* mc_stderr) {
    std::vector<std::vector<double>> feasible;
    for (const auto& s : pop)
        if (s.feasible()) feasible.push_back(s.objs);
    if (feasible.empty()) {
        if (mc_stderr) *mc_stderr = kNaN;
        return kNaN;
    }
    return hypervolume_points(feasible, reference_point, mc_samples, mc_seed, mc_stderr);
}

std::vector<double> normalize(const std::vector<double>& objs,
                              const std::vector<double>& ideal,
                              const std::vector<double>& nadir) {
    if (objs.size() != ideal.size() || objs.size() != nadir.size())
        throw ContractViolation("normalize: dimension mismatch");
    std::vector<double> out(objs.size());
    for (std::size_t i = 0; i < objs.size(); ++i) {
        const double span = nadir[i] - ideal[i];
        if (!(span > 0.0))
            throw ContractViolation("normalize: degenerate objective component");
        out[i] = (objs[i] - ideal[i]) / span;
    }
    return out;
}

std::pair<std::vector<double>, std::vector<double>> front_extremes(
    const std::vector<std::vector<double>>& front) {
    if (front.empty()) throw ContractViolation("front_extremes: empty front");
    const std::size_t m = front.front().size();
    std::vector<double> ideal(m, std::numeric_limits<double>::infinity());
    std::vector<double> nadir(m, -std::numeric_limits<double>::infinity());
    for (const auto& p : front) {
        for (std::size_t i = 0; i < m; ++i) {
            ideal[i] = std::min(ideal[i], p[i]);
            nadir[i] = std::max(nadir[i], p[i]);
        }
    }
    return {ideal, nadir};
}

MetricReport compute_report(const std::vector<Solution>& pop,
                            const std::vector<std::vector<double>>& reference_front,
                            double hv_ref) {
    MetricReport rep;
    auto [ideal, nadir] = front_extremes(reference_front);
    rep.ideal = ideal;
    rep.nadir = nadir;
    rep.reference_point.assign(ideal.size(), hv_ref);
    for (const auto& s : pop)
        if (s.feasible()) ++rep.feasible_count;

    rep.igd = igd(reference_front, pop);
    if (rep.feasible_count == 0) {
        rep.hv = kNaN;
        return rep;
    }
    std::vector<std::vector<double>> normalized;
    normalized.reserve(rep.feasible_count);
    for (const auto& s : pop)
        if (s.feasible()) normalized.push_back(normalize(s.objs, ideal, nadir));
    rep.hv = hypervolume_points(normalized, rep.reference_point);
    return rep;
}

}  // namespace cmoforge::metrics
