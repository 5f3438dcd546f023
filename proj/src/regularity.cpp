#include "metrikos/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace metrikos::regularity {

using core::DistanceSpace;
using core::Verdict;
using core::Witness;

double monotone_search(const SearchSchedule& schedule, const std::function<bool(double)>& pred) {
    if (!(schedule.lo > 0.0 && schedule.lo < schedule.hi && schedule.resolution > 0.0)) {
        throw InputError("search schedule needs 0 < lo < hi and positive resolution");
    }
    if (!pred(schedule.lo)) {
        throw SearchError("certificate not found at this resolution: predicate fails at " +
                          format_number(schedule.lo));
    }
    double lo = schedule.lo;
    double hi = schedule.lo;
    bool bracketed = false;
    while (hi < schedule.hi) {
        const double next = std::min(hi * 2.0, schedule.hi);
        if (pred(next)) {
            lo = next;
            hi = next;
        } else {
            hi = next;
            bracketed = true;
            break;
        }
    }
    if (!bracketed) return schedule.hi;
    // Invariant: pred(lo) true, pred(hi) false. Refine to relative width.
    for (int it = 0; it < 200 && hi - lo > schedule.resolution * lo; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (pred(mid) ? lo : hi) = mid;
    }
    return lo;
}

namespace {

std::vector<double> phi_candidates(const DistanceSpace& space) {
    const std::vector<double> values = space.positive_distance_values();
    std::vector<double> cands(values);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        cands.push_back(0.5 * (values[i] + values[i + 1]));
    }
    if (cands.empty()) cands.push_back(1.0);  // singleton space: vacuous modulus
    std::sort(cands.begin(), cands.end(), std::greater<>());
    return cands;
}

}  // namespace

std::optional<RegularityCertificate> locally_regular_phi(const DistanceSpace& space,
                                                         const std::string& anchor, double eps,
                                                         Tolerance tol) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("eps must be positive and finite");
    const std::size_t a = space.index_of(anchor);
    const std::size_t n = space.size();
    for (double phi : phi_candidates(space)) {
        bool ok = true;
        bool fired = false;
        double margin = eps;
        for (std::size_t b = 0; b < n && ok; ++b) {
            if (!tol.lt_strict(space.d(a, b), phi)) continue;
            for (std::size_t c = 0; c < n; ++c) {
                if (!tol.lt_strict(space.d(b, c), phi)) continue;
                fired = true;
                if (!tol.lt_strict(space.d(a, c), eps)) {
                    ok = false;
                    break;
                }
                margin = std::min(margin, eps - space.d(a, c));
            }
        }
        if (ok) {
            RegularityCertificate cert;
            cert.condition = "iii-A";
            cert.anchor = anchor;
            cert.scale = eps;
            cert.value = phi;
            cert.method = "grid-search";
            cert.margin = margin;
            if (!fired) cert.extras["vacuous"] = 1.0;
            return cert;
        }
    }
    return std::nullopt;
}

std::optional<RegularityCertificate> uniform_phi(const DistanceSpace& space, double eps,
                                                 Tolerance tol) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("eps must be positive and finite");
    const std::size_t n = space.size();
    for (double phi : phi_candidates(space)) {
        bool ok = true;
        bool fired = false;
        double margin = eps;
        for (std::size_t x = 0; x < n && ok; ++x) {
            for (std::size_t y = 0; y < n && ok; ++y) {
                if (!tol.lt_strict(space.d(x, y), phi)) continue;
                for (std::size_t z = 0; z < n; ++z) {
                    if (!tol.lt_strict(space.d(y, z), phi)) continue;
                    fired = true;
                    if (!tol.lt_strict(space.d(x, z), eps)) {
                        ok = false;
                        break;
                    }
                    margin = std::min(margin, eps - space.d(x, z));
                }
            }
        }
        if (ok) {
            RegularityCertificate cert;
            cert.condition = "uniform";
            cert.scale = eps;
            cert.value = phi;
            cert.method = "grid-search";
            cert.margin = margin;
            if (!fired) cert.extras["vacuous"] = 1.0;
            return cert;
        }
    }
    return std::nullopt;
}

RegularityCertificate phi_from_f(const core::FParams& params, double eps,
                                 SearchSchedule schedule, Tolerance tol) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("eps must be positive and finite");
    const double level = params.f(eps) - params.alpha;
    double delta;
    try {
        delta = monotone_search(schedule,
                                [&](double t) { return tol.lt_strict(params.f(t), level); });
    } catch (const SearchError&) {
        throw SearchError("F2 certificate not found at this resolution (eps=" +
                          format_number(eps) + ")");
    }
    // Replay of the implication's binding sample: t1, t2 < phi gives
    // t1 + t2 < 2*phi = delta, and f(delta) < f(eps) - alpha was verified.
    const double at_delta = params.f(delta);
    if (!tol.lt_strict(at_delta, level)) {
        throw SearchError("F2 certificate failed replay at delta=" + format_number(delta));
    }
    RegularityCertificate cert;
    cert.condition = "uniform";
    cert.scale = eps;
    cert.value = 0.5 * delta;
    cert.method = "paper-formula";
    cert.margin = level - at_delta;
    cert.resolution = schedule.resolution;
    cert.extras["delta"] = delta;
    cert.extras["phi"] = 0.5 * delta;
    return cert;
}

RegularityCertificate r_for_b(const core::BParams& params, double t) {
    if (!(params.K > 0.0) || !std::isfinite(params.K)) throw InputError("K must be positive");
    if (!(t > 0.0) || !std::isfinite(t)) throw InputError("scale t must be positive and finite");
    RegularityCertificate cert;
    cert.condition = "iii-C";
    cert.scale = t;
    cert.value = t / params.K;
    cert.method = "paper-formula";
    cert.extras["K"] = params.K;
    return cert;
}

Verdict verify_iiiC(const DistanceSpace& space, const std::string& anchor, double k, double r,
                    Tolerance tol) {
    if (!(k > 0.0) || !(r > 0.0)) throw InputError("scales k and r must be positive");
    const std::size_t a = space.index_of(anchor);
    const std::size_t n = space.size();
    double min_sum = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < n; ++b) {
        if (!(space.d(a, b) >= k)) continue;
        for (std::size_t c = 0; c < n; ++c) {
            const double sum = space.d(a, c) + space.d(b, c);
            min_sum = std::min(min_sum, sum);
            if (!tol.geq(sum, r)) {
                return Verdict::fail(Witness{"iii-C",
                                             {space.label(b), space.label(c)},
                                             sum,
                                             r,
                                             "d(a,c)+d(b,c) < r"},
                                     {{"min_sum", min_sum}});
            }
        }
    }
    std::map<std::string, double> certs;
    if (std::isfinite(min_sum)) {
        certs["min_sum"] = min_sum;
    } else {
        certs["vacuous"] = 1.0;  // no b with d(a,b) >= k
    }
    return Verdict::ok(std::move(certs));
}

Verdict replay_uniform_phi(const DistanceSpace& space, double phi, double eps, Tolerance tol) {
    if (!(phi > 0.0) || !(eps > 0.0)) throw InputError("phi and eps must be positive");
    const std::size_t n = space.size();
    double min_margin = std::numeric_limits<double>::infinity();
    std::size_t fired = 0;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (!tol.lt_strict(space.d(x, y), phi)) continue;
            for (std::size_t z = 0; z < n; ++z) {
                if (!tol.lt_strict(space.d(y, z), phi)) continue;
                ++fired;
                if (!tol.lt_strict(space.d(x, z), eps)) {
                    return Verdict::fail(
                        Witness{"uniform-phi",
                                {space.label(x), space.label(y), space.label(z)},
                                space.d(x, z),
                                eps,
                                "d(x,z) >= eps although d(x,y), d(y,z) < phi"});
                }
                min_margin = std::min(min_margin, eps - space.d(x, z));
            }
        }
    }
    std::map<std::string, double> certs;
    if (fired > 0) {
        certs["min_margin"] = min_margin;
        certs["triples"] = static_cast<double>(fired);
    } else {
        certs["vacuous"] = 1.0;  // no pair below phi
    }
    return Verdict::ok(std::move(certs));
}

RegularityCertificate r_from_f(const core::FParams& params, double k, SearchSchedule schedule,
                               Tolerance tol) {
    if (!(k > 0.0) || !std::isfinite(k)) throw InputError("scale k must be positive and finite");
    const double level = params.f(k) - params.alpha;
    double r;
    try {
        r = monotone_search(schedule,
                            [&](double t) { return tol.lt_strict(params.f(t), level); });
    } catch (const SearchError&) {
        throw SearchError("F2 certificate not found at this resolution (k=" + format_number(k) +
                          ")");
    }
    RegularityCertificate cert;
    cert.condition = "iii-C";
    cert.scale = k;
    cert.value = r;
    cert.method = "paper-formula";
    cert.margin = level - params.f(r);
    cert.resolution = schedule.resolution;
    return cert;
}

RegularityCertificate delta_theta_at_origin(const core::ThetaParams& theta, double k,
                                            SearchSchedule schedule, Tolerance tol) {
    if (!(k > 0.0) || !std::isfinite(k)) throw InputError("scale k must be positive and finite");
    // theta is monotone in each argument for a B-action, so on the square
    // [0,t]^2 the corner theta(t,t) is the largest sample.
    double delta;
    try {
        delta = monotone_search(
            schedule, [&](double t) { return tol.lt_strict(theta.theta(t, t), k); });
    } catch (const SearchError&) {
        throw SearchError("continuity certificate not found at this resolution (k=" +
                          format_number(k) + ")");
    }
    RegularityCertificate cert;
    cert.condition = "iii-C";
    cert.scale = k;
    cert.value = delta / std::sqrt(2.0);
    cert.method = "paper-formula";
    cert.margin = k - theta.theta(delta, delta);
    cert.resolution = schedule.resolution;
    cert.extras["delta"] = delta;
    return cert;
}

Verdict check_iiiB(const core::SampledSequence& d_an_a, const core::SampledSequence& d_an_bn,
                   const core::SampledSequence& d_bn_a, double tol,
                   std::optional<double> tol_prime) {
    if (d_an_a.values.size() != d_an_bn.values.size() ||
        d_an_a.values.size() != d_bn_a.values.size()) {
        throw InputError("the three traces must have equal length");
    }
    if (!(tol > 0.0)) throw InputError("tol must be positive");
    const double tp = tol_prime.value_or(tol);
    const std::size_t n = d_an_a.values.size();

    // Largest tail on which both premise traces stay below tol.
    std::size_t tail = n;
    for (std::size_t i = n; i-- > 0;) {
        if (d_an_a.values[i] < tol && d_an_bn.values[i] < tol) {
            tail = i;
        } else {
            break;
        }
    }
    if (tail == n) {
        return Verdict::ok({{"vacuous", 1.0}});
    }
    // d(b_n, a) must stay below tol' from some index of that tail onward.
    std::size_t decay = n;
    for (std::size_t i = n; i-- > tail;) {
        if (d_bn_a.values[i] < tp) {
            decay = i;
        } else {
            break;
        }
    }
    if (decay == n) {
        return Verdict::fail(Witness{"iii-B",
                                     {std::to_string(tail + 1)},
                                     d_bn_a.values[tail],
                                     tp,
                                     "d(b_n,a) never drops below tol' on the tail"},
                             {{"tail_start", static_cast<double>(tail + 1)}});
    }
    return Verdict::ok({{"tail_start", static_cast<double>(tail + 1)},
                        {"decay_start", static_cast<double>(decay + 1)}});
}

Verdict cross_check_conditions(const DistanceSpace& space, const std::vector<double>& eps_grid,
                               Tolerance tol) {
    if (eps_grid.empty()) throw InputError("eps grid must be non-empty");
    const std::size_t n = space.size();
    for (double eps : eps_grid) {
        if (!(eps > 0.0) || !std::isfinite(eps)) {
            throw InputError("eps grid values must be positive and finite");
        }
        for (std::size_t ai = 0; ai < n; ++ai) {
            const std::string& anchor = space.label(ai);
            const bool exists_A = locally_regular_phi(space, anchor, eps, tol).has_value();

            // (iii-C) at matched scale k = eps: the best r is the minimal
            // realized sum over qualifying b; existence means it is positive.
            bool exists_C = true;
            double min_sum = std::numeric_limits<double>::infinity();
            for (std::size_t b = 0; b < n; ++b) {
                if (!(space.d(ai, b) >= eps)) continue;
                for (std::size_t c = 0; c < n; ++c) {
                    min_sum = std::min(min_sum, space.d(ai, c) + space.d(b, c));
                }
            }
            if (std::isfinite(min_sum)) {
                exists_C = min_sum > 0.0 &&
                           verify_iiiC(space, anchor, eps, min_sum, tol).pass;
            }
            if (exists_A != exists_C) {
                return Verdict::fail(Witness{"cross-check",
                                             {anchor, format_number(eps)},
                                             exists_A ? 1.0 : 0.0,
                                             exists_C ? 1.0 : 0.0,
                                             "iii-A and iii-C existence disagree"});
            }
        }
    }
    return Verdict::ok({{"anchors", static_cast<double>(n)},
                        {"scales", static_cast<double>(eps_grid.size())}});
}

}  // namespace metrikos::regularity
