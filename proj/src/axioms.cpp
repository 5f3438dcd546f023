#include "metrikos/axioms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace metrikos::axioms {

using core::DistanceSpace;
using core::Verdict;
using core::Witness;

SpMatrix SpMatrix::compute(const DistanceSpace& space) {
    const std::size_t n = space.size();
    SpMatrix result;
    result.sp_ = space.matrix();
    result.next_.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) result.next_[i * n + j] = j;
    }
    auto& sp = result.sp_;
    auto& next = result.next_;
    // Floyd-Warshall. Symmetry of the input survives every relaxation step
    // exactly: the two mirror sums add the same pair of doubles.
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const double dik = sp(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == k || j == i) continue;
                const double via = dik + sp(k, j);
                if (via < sp(i, j)) {
                    sp(i, j) = via;
                    next[i * n + j] = next[i * n + k];
                }
            }
        }
    }
    return result;
}

std::vector<std::size_t> SpMatrix::chain(std::size_t i, std::size_t j) const {
    const std::size_t n = side();
    std::vector<std::size_t> out{i};
    std::size_t cur = i;
    while (cur != j) {
        cur = next_[cur * n + j];
        out.push_back(cur);
        if (out.size() > n) throw InputError("chain reconstruction cycled");
    }
    return out;
}

SpMatrix all_pairs_min_chain(const DistanceSpace& space) { return SpMatrix::compute(space); }

BAnalysis min_b_analysis(const DistanceSpace& space) {
    const std::size_t n = space.size();
    BAnalysis best;
    if (n < 2) return best;
    best.K_min = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            for (std::size_t z = 0; z < n; ++z) {
                if (x == z) continue;
                const double denom = space.d(x, y) + space.d(y, z);
                const double ratio = space.d(x, z) / denom;
                if (ratio > best.K_min) {
                    best.K_min = ratio;
                    best.x = x;
                    best.y = y;
                    best.z = z;
                }
            }
        }
    }
    return best;
}

double min_b_constant(const DistanceSpace& space) { return min_b_analysis(space).K_min; }

Verdict check_b(const DistanceSpace& space, const core::BParams& params, Tolerance tol) {
    if (!(params.K > 0.0) || !std::isfinite(params.K)) {
        throw InputError("coefficient K must be positive and finite");
    }
    const BAnalysis a = min_b_analysis(space);
    std::map<std::string, double> certs{{"K_min", a.K_min}, {"margin", params.K - a.K_min}};
    if (tol.geq(params.K, a.K_min)) return Verdict::ok(std::move(certs));
    const double lhs = space.d(a.x, a.z);
    const double rhs = params.K * (space.d(a.x, a.y) + space.d(a.y, a.z));
    return Verdict::fail(Witness{"b-triangle",
                                 {space.label(a.x), space.label(a.y), space.label(a.z)},
                                 lhs,
                                 rhs,
                                 "d(x,z) > K*(d(x,y)+d(y,z))"},
                         std::move(certs));
}

Verdict check_f_metric(const DistanceSpace& space, const core::FParams& params, Tolerance tol) {
    if (!(params.alpha >= 0.0) || !std::isfinite(params.alpha)) {
        throw InputError("alpha must be a nonnegative finite real");
    }
    const std::size_t n = space.size();
    const SpMatrix sp = SpMatrix::compute(space);
    double min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!(space.d(i, j) > 0.0)) continue;  // (D3) premise D(x,y) > 0
            const double lhs = params.f(space.d(i, j));
            const double rhs = params.f(sp.sp(i, j)) + params.alpha;
            min_margin = std::min(min_margin, rhs - lhs);
            if (!tol.leq(lhs, rhs)) {
                std::vector<std::string> pts;
                for (std::size_t u : sp.chain(i, j)) pts.push_back(space.label(u));
                return Verdict::fail(
                    Witness{"D3", std::move(pts), lhs, rhs, "f(d(x,y)) > f(sp(x,y)) + alpha"},
                    {{"margin", min_margin}});
            }
        }
    }
    std::map<std::string, double> certs;
    if (std::isfinite(min_margin)) certs["margin"] = min_margin;
    return Verdict::ok(std::move(certs));
}

Verdict check_f1_monotone(const expr::ScalarFn& f, const std::vector<double>& grid,
                          Tolerance tol) {
    if (grid.size() < 2) throw InputError("F1 grid needs at least two points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
            throw InputError("F1 grid values must be positive and finite");
        }
        if (i > 0 && !(grid[i - 1] < grid[i])) {
            throw InputError("F1 grid must be strictly increasing");
        }
    }
    double prev = f(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = f(grid[i]);
        if (!tol.leq(prev, cur)) {
            return Verdict::fail(Witness{"F1",
                                         {format_number(grid[i - 1]), format_number(grid[i])},
                                         prev,
                                         cur,
                                         "f(s) > f(t) for s < t"});
        }
        prev = cur;
    }
    return Verdict::ok();
}

std::vector<double> default_f1_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 90; ++i) g.push_back(std::pow(10.0, -6.0 + i / 10.0));
    return g;
}

Verdict check_f2_limit(const expr::ScalarFn& f, DecaySchedule schedule, int threshold_drops,
                       Tolerance tol) {
    if (!(schedule.t0 > 0.0) || !std::isfinite(schedule.t0)) {
        throw InputError("F2 schedule needs t0 > 0");
    }
    if (!(schedule.q > 0.0 && schedule.q < 1.0)) throw InputError("F2 schedule needs 0 < q < 1");
    if (threshold_drops < 1 || threshold_drops > 15) {
        throw InputError("threshold_drops must be between 1 and 15");
    }

    // Walk t_k = t0*q^k down to the edge of the double range. Evaluation
    // failures deep in the walk (underflow-induced domain errors) truncate
    // it; a failure on the very first sample is a genuine domain error.
    std::vector<double> ts, fs;
    constexpr std::size_t kMaxSteps = 200000;
    double t = schedule.t0;
    while (t >= 1e-300 && ts.size() < kMaxSteps) {
        double value;
        try {
            value = f(t);
        } catch (const EvalError&) {
            if (ts.empty()) throw;
            break;
        }
        ts.push_back(t);
        fs.push_back(value);
        t *= schedule.q;
    }
    if (ts.size() < 2) throw InputError("F2 schedule produced fewer than two samples");

    std::map<std::string, double> certs{{"heuristic", 1.0},
                                        {"steps", static_cast<double>(ts.size())}};

    // Tail monotonicity: the last quarter of the walk must be non-increasing.
    const std::size_t tail_start = ts.size() - std::max<std::size_t>(ts.size() / 4, 1);
    for (std::size_t k = tail_start; k + 1 < ts.size(); ++k) {
        if (!tol.leq(fs[k + 1], fs[k])) {
            return Verdict::fail(Witness{"F2",
                                         {format_number(ts[k]), format_number(ts[k + 1])},
                                         fs[k + 1],
                                         fs[k],
                                         "f increases along the decay tail"},
                                 std::move(certs));
        }
    }

    const std::size_t argmin =
        static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());
    const double drop = -fs[argmin];
    certs["max_drop"] = drop;
    if (!(drop >= 10.0)) {
        return Verdict::fail(Witness{"F2",
                                     {format_number(ts[argmin])},
                                     fs[argmin],
                                     -10.0,
                                     "min f(t_k) stays above the first threshold"},
                             std::move(certs));
    }
    const int M = threshold_drops;
    const double base = drop >= std::pow(10.0, M) ? 10.0 : std::pow(drop, 1.0 / M);
    certs["threshold_base"] = base;
    for (int m = 1; m <= M; ++m) {
        const double threshold = -std::pow(base, m);
        bool crossed = false;
        for (double v : fs) {
            if (tol.leq(v, threshold)) {
                crossed = true;
                break;
            }
        }
        if (!crossed) {
            return Verdict::fail(Witness{"F2",
                                         {format_number(ts[argmin])},
                                         fs[argmin],
                                         threshold,
                                         "min f(t_k) stays above a threshold"},
                                 std::move(certs));
        }
    }
    return Verdict::ok(std::move(certs));
}

std::vector<double> default_action_grid() {
    std::vector<double> g{0.0};
    for (int e = -10; e <= 4; ++e) g.push_back(std::ldexp(1.0, e));
    return g;
}

std::vector<double> refine_grid(const std::vector<double>& grid) {
    if (grid.size() < 2) return grid;
    std::vector<double> out;
    out.reserve(grid.size() * 2 - 1);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        out.push_back(grid[i]);
        out.push_back(0.5 * (grid[i] + grid[i + 1]));
    }
    out.push_back(grid.back());
    return out;
}

namespace {

void validate_action_grid(const std::vector<double>& grid) {
    if (grid.size() < 3) throw InputError("B-action grid needs at least three points");
    if (grid.front() != 0.0) throw InputError("B-action grid must start at 0");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
            throw InputError("B-action grid values must be finite and nonnegative");
        }
        if (i > 0 && !(grid[i - 1] < grid[i])) {
            throw InputError("B-action grid must be strictly increasing");
        }
    }
}

Witness monotonicity_witness(double x, double y, double s, double t, double lhs, double rhs) {
    return Witness{"B-ii",
                   {format_number(x), format_number(y), format_number(s), format_number(t)},
                   lhs,
                   rhs,
                   "theta(x,y) >= theta(s,t) despite (x,y) <= (s,t), (x,y) != (s,t)"};
}

}  // namespace

Verdict check_b_action_axioms(const core::ThetaParams& theta, const std::vector<double>& grid,
                              Tolerance tol) {
    validate_action_grid(grid);
    const auto& th = theta.theta;
    const std::size_t g = grid.size();

    // Axiom (i): theta(0,0) = 0 and symmetry.
    const double origin = th(0.0, 0.0);
    if (!tol.eq(origin, 0.0)) {
        return Verdict::fail(Witness{"B-i", {"0", "0"}, origin, 0.0, "theta(0,0) != 0"});
    }
    std::vector<double> cache(g * g);
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j) cache[i * g + j] = th(grid[i], grid[j]);
    }
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = i + 1; j < g; ++j) {
            if (!tol.eq(cache[i * g + j], cache[j * g + i])) {
                return Verdict::fail(Witness{"B-i",
                                             {format_number(grid[i]), format_number(grid[j])},
                                             cache[i * g + j],
                                             cache[j * g + i],
                                             "theta(s,t) != theta(t,s)"});
            }
        }
    }

    // Axiom (ii), probe tuples first: unit-scale samples whose verdicts do
    // not depend on the grid, so a degenerate action always yields the same
    // witness no matter the refinement level.
    constexpr std::array<std::array<double, 4>, 4> probes{{
        {1.0, 0.0, 1.0, 0.5},
        {0.0, 1.0, 0.5, 1.0},
        {1.0, 0.5, 1.0, 1.0},
        {0.5, 1.0, 1.0, 1.0},
    }};
    for (const auto& p : probes) {
        const double lhs = th(p[0], p[1]);
        const double rhs = th(p[2], p[3]);
        if (!tol.lt_strict(lhs, rhs)) {
            return Verdict::fail(monotonicity_witness(p[0], p[1], p[2], p[3], lhs, rhs));
        }
    }
    // Exhaustive part: strict increase along single-coordinate grid steps.
    // Tolerance-strict < composes transitively, so every dominated grid
    // 4-tuple is covered by a walk of such steps.
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j + 1 < g; ++j) {
            const double lhs = cache[i * g + j];
            const double rhs = cache[i * g + j + 1];
            if (!tol.lt_strict(lhs, rhs)) {
                return Verdict::fail(
                    monotonicity_witness(grid[i], grid[j], grid[i], grid[j + 1], lhs, rhs));
            }
            const double lhs2 = cache[j * g + i];
            const double rhs2 = cache[(j + 1) * g + i];
            if (!tol.lt_strict(lhs2, rhs2)) {
                return Verdict::fail(
                    monotonicity_witness(grid[j], grid[i], grid[j + 1], grid[i], lhs2, rhs2));
            }
        }
    }

    // Axiom (iv): theta(s,0) <= s for grid s > 0.
    for (std::size_t i = 0; i < g; ++i) {
        if (!(grid[i] > 0.0)) continue;
        const double v = cache[i * g + 0];
        if (!tol.leq(v, grid[i])) {
            return Verdict::fail(
                Witness{"B-iv", {format_number(grid[i]), "0"}, v, grid[i], "theta(s,0) > s"});
        }
    }
    return Verdict::ok();
}

Verdict check_b_action_solvability(const core::ThetaParams& theta,
                                   const std::vector<double>& grid, Tolerance tol) {
    validate_action_grid(grid);
    const auto& th = theta.theta;

    // Sampled image values, deduplicated; capped by deterministic stride so
    // refined grids stay cheap.
    std::set<double> image;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i; j < grid.size(); ++j) image.insert(th(grid[i], grid[j]));
    }
    std::vector<double> ms(image.begin(), image.end());
    constexpr std::size_t kMaxImageSamples = 64;
    constexpr std::size_t kMaxTSamples = 32;
    if (ms.size() > kMaxImageSamples) {
        std::vector<double> pick;
        const double stride = static_cast<double>(ms.size() - 1) / (kMaxImageSamples - 1);
        for (std::size_t s = 0; s < kMaxImageSamples; ++s) {
            pick.push_back(ms[static_cast<std::size_t>(s * stride + 0.5)]);
        }
        pick.erase(std::unique(pick.begin(), pick.end()), pick.end());
        ms = std::move(pick);
    }

    std::map<std::string, double> certs{{"heuristic", 1.0}};
    double worst_residual = 0.0;
    std::size_t samples = 0;
    for (double m : ms) {
        std::vector<double> ts;
        for (double t : grid) {
            if (t <= m) ts.push_back(t);
        }
        if (ts.size() > kMaxTSamples) {
            std::vector<double> pick;
            const double stride = static_cast<double>(ts.size() - 1) / (kMaxTSamples - 1);
            for (std::size_t s = 0; s < kMaxTSamples; ++s) {
                pick.push_back(ts[static_cast<std::size_t>(s * stride + 0.5)]);
            }
            pick.erase(std::unique(pick.begin(), pick.end()), pick.end());
            ts = std::move(pick);
        }
        for (double t : ts) {
            ++samples;
            const double at_zero = th(0.0, t);
            const double at_m = th(m, t);
            // theta increases in s, so a solution in [0,m] exists only if
            // the endpoints bracket the level m.
            if (!tol.leq(at_zero, m)) {
                certs["samples"] = static_cast<double>(samples);
                return Verdict::fail(Witness{"B-iii",
                                             {format_number(m), format_number(t)},
                                             at_zero,
                                             m,
                                             "theta(0,t) > m: no s in [0,m] solves theta(s,t)=m"},
                                     std::move(certs));
            }
            if (!tol.geq(at_m, m)) {
                certs["samples"] = static_cast<double>(samples);
                return Verdict::fail(Witness{"B-iii",
                                             {format_number(m), format_number(t)},
                                             at_m,
                                             m,
                                             "theta(m,t) < m: no s in [0,m] solves theta(s,t)=m"},
                                     std::move(certs));
            }
            double lo = 0.0, hi = m;
            for (int it = 0; it < 60 && hi - lo > 0.0; ++it) {
                const double mid = 0.5 * (lo + hi);
                (th(mid, t) < m ? lo : hi) = mid;
            }
            const double resid = std::fabs(th(0.5 * (lo + hi), t) - m);
            worst_residual = std::max(worst_residual, resid);
            if (!tol.eq(th(0.5 * (lo + hi), t), m)) {
                certs["samples"] = static_cast<double>(samples);
                certs["worst_residual"] = worst_residual;
                return Verdict::fail(Witness{"B-iii",
                                             {format_number(m), format_number(t)},
                                             th(0.5 * (lo + hi), t),
                                             m,
                                             "bisection residual exceeds tolerance"},
                                     std::move(certs));
            }
        }
    }
    certs["samples"] = static_cast<double>(samples);
    certs["worst_residual"] = worst_residual;
    return Verdict::ok(std::move(certs));
}

Verdict check_b_action(const core::ThetaParams& theta, const std::vector<double>& grid,
                       Tolerance tol) {
    Verdict axioms_part = check_b_action_axioms(theta, grid, tol);
    if (!axioms_part.pass) return axioms_part;
    Verdict solvability = check_b_action_solvability(theta, grid, tol);
    solvability.certificates.insert(axioms_part.certificates.begin(),
                                    axioms_part.certificates.end());
    return solvability;
}

Verdict check_theta_metric(const core::DistanceSpace& space, const core::ThetaParams& theta,
                           Tolerance tol) {
    const std::size_t n = space.size();
    bool violated = false;
    double worst = 0.0;
    std::size_t wx = 0, wy = 0, wz = 0;
    double wlhs = 0.0, wrhs = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            for (std::size_t z = 0; z < n; ++z) {
                const double lhs = space.d(x, z);
                const double rhs = theta.theta(space.d(x, y), space.d(y, z));
                if (tol.leq(lhs, rhs)) continue;
                const double margin = lhs - rhs;
                if (!violated || margin > worst) {
                    violated = true;
                    worst = margin;
                    wx = x;
                    wy = y;
                    wz = z;
                    wlhs = lhs;
                    wrhs = rhs;
                }
            }
        }
    }
    if (!violated) return Verdict::ok();
    return Verdict::fail(Witness{"theta-triangle",
                                 {space.label(wx), space.label(wy), space.label(wz)},
                                 wlhs,
                                 wrhs,
                                 "d(x,z) > theta(d(x,y),d(y,z))"},
                         {{"max_violation", worst}});
}

double theta_fold(const core::ThetaParams& theta, const std::vector<double>& values) {
    if (values.empty()) throw InputError("theta_fold needs at least one value");
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InputError("theta_fold values must be finite and nonnegative");
        }
    }
    double acc = values[0];
    for (std::size_t i = 1; i < values.size(); ++i) acc = theta.theta(acc, values[i]);
    return acc;
}

Verdict check_chain_bound(const core::DistanceSpace& space, const core::ThetaParams& theta,
                          const std::vector<std::string>& chain, Tolerance tol) {
    if (chain.size() < 2) throw InputError("chain needs at least two labels");
    std::vector<std::size_t> idx;
    idx.reserve(chain.size());
    for (const auto& label : chain) idx.push_back(space.index_of(label));
    std::vector<double> edges;
    for (std::size_t i = 0; i + 1 < idx.size(); ++i) edges.push_back(space.d(idx[i], idx[i + 1]));
    const double fold = theta_fold(theta, edges);
    const double direct = space.d(idx.front(), idx.back());
    if (tol.leq(direct, fold)) {
        return Verdict::ok({{"fold", fold}, {"direct", direct}});
    }
    return Verdict::fail(
        Witness{"chain-bound", chain, direct, fold, "d(first,last) > theta_fold(edges)"},
        {{"fold", fold}});
}

}  // namespace metrikos::axioms
