#include "cmoforge/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cmoforge::tric {

namespace {

constexpr double kPi = 3.14159265358979323846;

double base_distance(const std::vector<double>& x, std::size_t first) {
    double g = 1.0;
    for (std::size_t i = first; i < x.size(); ++i) {
        const double d = x[i] - 0.5;
        g += d * d;
    }
    return g;
}

double type1_constraint(double f1, const TricParams& p) {
    return p.b - std::sin(p.a * kPi * f1);
}

}  // namespace

std::string to_string(TricId id) {
    switch (id) {
        case TricId::tric1: return "TRIC1";
        case TricId::tric2: return "TRIC2";
        case TricId::tric3: return "TRIC3";
        case TricId::tric4: return "TRIC4";
        case TricId::tric5: return "TRIC5";
        case TricId::tric6: return "TRIC6";
        case TricId::tric7: return "TRIC7";
    }
    return "TRIC?";
}

TricId parse_tric_id(const std::string& name) {
    for (TricId id : all_problems)
        if (to_string(id) == name) return id;
    throw ContractViolation("unknown problem id: " + name);
}

TricParams params_for(TricId id, int n) {
    TricParams p;
    p.rho = 0.0025 * static_cast<double>(n - 1);
    p.e = (id == TricId::tric6) ? 1.3 : 1.2;
    return p;
}

int default_dimension(TricId) { return 10; }

int min_dimension(TricId id) {
    switch (id) {
        // The convergence-offset front needs g up to ~1.37, so the distance
        // term must be able to reach 0.25 * (n - 1) >= 0.37; below n = 3 the
        // TRIC5 combination is jointly infeasible outright.
        case TricId::tric3:
        case TricId::tric5:
        case TricId::tric6:
            return 3;
        default:
            return 2;
    }
}

ProblemDefinition make_problem(TricId id) { return make_problem(id, default_dimension(id)); }

ProblemDefinition make_problem(TricId id, int n) {
    if (n < min_dimension(id))
        throw ContractViolation(to_string(id) + " requires n >= " +
                                std::to_string(min_dimension(id)));
    const TricParams p = params_for(id, n);

    ProblemDefinition def;
    def.name = to_string(id);
    def.n = n;
    def.m = (id == TricId::tric6) ? 3 : 2;
    def.lower.assign(static_cast<std::size_t>(n), 0.0);
    def.upper.assign(static_cast<std::size_t>(n), 1.0);
    def.delta = p.delta;

    switch (id) {
        case TricId::tric1:
        case TricId::tric2:
        case TricId::tric3:
            def.q = 1;
            def.l = 1;
            break;
        case TricId::tric4:
        case TricId::tric5:
            def.q = 2;
            def.l = 2;
            break;
        case TricId::tric6:
            def.q = 1;
            def.l = 1;
            break;
        case TricId::tric7:
            def.q = 0;
            def.l = 1;
            break;
    }

    if (id == TricId::tric6) {
        def.evaluator = [p](const std::vector<double>& x) {
            const double r = base_distance(x, 2);  // radius = 1 + g6
            const double c0 = std::cos(kPi * x[0] / 2.0);
            const double s0 = std::sin(kPi * x[0] / 2.0);
            const double c1 = std::cos(kPi * x[1] / 2.0);
            const double s1 = std::sin(kPi * x[1] / 2.0);
            const double f1 = r * c0 * c1;
            const double f2 = r * c0 * s1;
            const double f3 = r * s0;
            return EvalOutput{{f1, f2, f3}, {p.e - (f1 + f2 + f3)}};
        };
    } else {
        def.evaluator = [id, p](const std::vector<double>& x) {
            const double g = base_distance(x, 1);
            const double f1 = x[0];
            const double f2 = g * (1.0 - std::sqrt(f1 / g));
            std::vector<double> cons;
            switch (id) {
                case TricId::tric1:
                    cons = {type1_constraint(f1, p)};
                    break;
                case TricId::tric2:
                    cons = {(g - 1.0) - p.rho};
                    break;
                case TricId::tric3:
                    cons = {p.e - (f1 + f2)};
                    break;
                case TricId::tric4:
                    cons = {type1_constraint(f1, p), (g - 1.0) - p.rho};
                    break;
                case TricId::tric5:
                    cons = {type1_constraint(f1, p), p.e - (f1 + f2)};
                    break;
                case TricId::tric7:
                    cons = {(g - 1.0) - p.r2};  // equality
                    break;
                default:
                    break;
            }
            return EvalOutput{{f1, f2}, std::move(cons)};
        };
    }

    if (id == TricId::tric6) {
        def.cpf_sampler = [p](int k) {
            // Equal-area spiral over the unit-sphere octant; scaled out to the
            // plane f1+f2+f3 = e where the sphere dips inside it.
            std::vector<std::vector<double>> pts;
            pts.reserve(static_cast<std::size_t>(k));
            constexpr double golden = 0.6180339887498949;
            for (int i = 0; i < k; ++i) {
                const double s = (static_cast<double>(i) + 0.5) / static_cast<double>(k);
                const double phi =
                    (static_cast<double>(i) * golden -
                     std::floor(static_cast<double>(i) * golden)) * kPi / 2.0;
                const double c = std::sqrt(1.0 - s * s);
                std::vector<double> d = {c * std::cos(phi), c * std::sin(phi), s};
                const double sum = d[0] + d[1] + d[2];
                const double scale = std::max(1.0, p.e / sum);
                for (double& v : d) v *= scale;
                pts.push_back(std::move(d));
            }
            return pts;
        };
    } else {
        def.cpf_sampler = [id](int k) {
            const auto bands = cpf_parameter_bands(id);

            // Arc length per band via a fine polyline.
            constexpr int kResolution = 4096;
            std::vector<double> lengths(bands.size(), 0.0);
            for (std::size_t b = 0; b < bands.size(); ++b) {
                auto prev = cpf_curve_point(id, bands[b].t_lo);
                for (int j = 1; j <= kResolution; ++j) {
                    const double t = bands[b].t_lo +
                        (bands[b].t_hi - bands[b].t_lo) * j / kResolution;
                    const auto cur = cpf_curve_point(id, t);
                    lengths[b] += std::hypot(cur[0] - prev[0], cur[1] - prev[1]);
                    prev = cur;
                }
            }
            const double total = std::accumulate(lengths.begin(), lengths.end(), 0.0);

            // Largest-remainder allocation of k points across bands.
            std::vector<int> alloc(bands.size(), 0);
            std::vector<std::pair<double, std::size_t>> remainders;
            int assigned = 0;
            for (std::size_t b = 0; b < bands.size(); ++b) {
                const double quota = k * lengths[b] / total;
                alloc[b] = static_cast<int>(std::floor(quota));
                assigned += alloc[b];
                remainders.emplace_back(quota - alloc[b], b);
            }
            std::sort(remainders.begin(), remainders.end(), [](auto& x, auto& y) {
                if (x.first != y.first) return x.first > y.first;
                return x.second < y.second;
            });
            for (int r = 0; r < k - assigned; ++r) ++alloc[remainders[static_cast<std::size_t>(r)].second];

            std::vector<std::vector<double>> pts;
            pts.reserve(static_cast<std::size_t>(k));
            for (std::size_t b = 0; b < bands.size(); ++b) {
                if (alloc[b] == 0) continue;
                if (alloc[b] == 1) {
                    const auto f = cpf_curve_point(id, 0.5 * (bands[b].t_lo + bands[b].t_hi));
                    pts.push_back({f[0], f[1]});
                    continue;
                }
                for (int j = 0; j < alloc[b]; ++j) {
                    const double t = bands[b].t_lo +
                        (bands[b].t_hi - bands[b].t_lo) * j / (alloc[b] - 1);
                    const auto f = cpf_curve_point(id, t);
                    pts.push_back({f[0], f[1]});
                }
            }
            return pts;
        };
    }
    return def;
}

std::vector<FrontBand> cpf_parameter_bands(TricId id) {
    switch (id) {
        case TricId::tric1:
        case TricId::tric4:
        case TricId::tric5: {
            // sin(10*pi*t) >= 0.5  <=>  t in [k/5 + 1/60, k/5 + 1/12]
            std::vector<FrontBand> bands;
            for (int k = 0; k < 5; ++k)
                bands.push_back({k / 5.0 + 1.0 / 60.0, k / 5.0 + 1.0 / 12.0});
            return bands;
        }
        case TricId::tric2:
        case TricId::tric3:
        case TricId::tric7:
            return {{0.0, 1.0}};
        case TricId::tric6:
            throw ContractViolation("TRIC6 front is not a parameter curve");
    }
    return {};
}

std::array<double, 2> cpf_curve_point(TricId id, double t) {
    switch (id) {
        case TricId::tric1:
        case TricId::tric2:
        case TricId::tric4:
            return {t, 1.0 - std::sqrt(t)};
        case TricId::tric3:
        case TricId::tric5:
            return {t, 1.2 - t};
        case TricId::tric7:
            return {t, 1.1 - std::sqrt(1.1 * t)};
        case TricId::tric6:
            throw ContractViolation("TRIC6 front is not a parameter curve");
    }
    return {0.0, 0.0};
}

std::vector<std::vector<std::array<double, 2>>> cpf_polylines(TricId id,
                                                              int points_per_band) {
    std::vector<std::vector<std::array<double, 2>>> lines;
    for (const auto& band : cpf_parameter_bands(id)) {
        std::vector<std::array<double, 2>> line;
        line.reserve(static_cast<std::size_t>(points_per_band));
        for (int j = 0; j < points_per_band; ++j) {
            const double t =
                band.t_lo + (band.t_hi - band.t_lo) * j / (points_per_band - 1);
            line.push_back(cpf_curve_point(id, t));
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

std::vector<std::vector<double>> sample_cpf(const ProblemDefinition& problem, int k) {
    if (k < 2) throw ContractViolation("sample_cpf: K must be >= 2");
    if (!problem.has_cpf())
        throw ContractViolation("sample_cpf: " + problem.name + " has no front sampler");
    return problem.cpf_sampler(k);
}

double feasible_ratio_estimate(const ProblemDefinition& problem, int samples,
                               RandomSource& rng) {
    if (samples < 1) throw ContractViolation("feasible_ratio_estimate: samples must be >= 1");
    auto& stream = rng.stream("metrics");
    std::vector<double> x(static_cast<std::size_t>(problem.n));
    int feasible = 0;
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < problem.n; ++i) {
            const auto j = static_cast<std::size_t>(i);
            x[j] = problem.lower[j] +
                   uniform01(stream) * (problem.upper[j] - problem.lower[j]);
        }
        const EvalOutput out = problem.evaluator(x);
        if (constraint_violation(out.constraints, problem.q, problem.l, problem.delta) == 0.0)
            ++feasible;
    }
    return static_cast<double>(feasible) / static_cast<double>(samples);
}

std::vector<double> witness_point(TricId id, int n) {
    std::vector<double> x(static_cast<std::size_t>(n), 0.5);
    switch (id) {
        case TricId::tric1:
        case TricId::tric4:
            x[0] = 0.05;  // sin(10*pi*0.05) = 1
            break;
        case TricId::tric2:
            break;  // center point, g = 1
        case TricId::tric3:
            std::fill(x.begin(), x.end(), 1.0);
            x[0] = 0.0;  // f = (0, g) with g = 1 + 0.25(n-1) >= 1.5
            break;
        case TricId::tric5:
            std::fill(x.begin(), x.end(), 1.0);
            x[0] = 0.05;  // sin band plus a large distance term
            break;
        case TricId::tric6:
            std::fill(x.begin() + 2, x.end(), 1.0);
            break;
        case TricId::tric7: {
            const double off = std::sqrt(0.1 / static_cast<double>(n - 1));
            std::fill(x.begin() + 1, x.end(), 0.5 + off);
            break;
        }
    }
    return x;
}

std::vector<double> tric3_preimage(double t, int n, double g_margin) {
    if (!(t >= 0.0 && t <= 1.0)) throw ContractViolation("tric3_preimage: t outside [0, 1]");
    const double root = 0.5 * (std::sqrt(t) + std::sqrt(4.8 - 3.0 * t));
    const double g_star = root * root + g_margin;
    const double per_coord = (g_star - 1.0) / static_cast<double>(n - 1);
    if (per_coord > 0.25)
        throw ContractViolation("tric3_preimage: dimension too small for requested g");
    std::vector<double> x(static_cast<std::size_t>(n), 0.5 + std::sqrt(per_coord));
    x[0] = t;
    return x;
}

}  // namespace cmoforge::tric
