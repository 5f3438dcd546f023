#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "metrikos/core.hpp"

namespace metrikos::regularity {

/// A computed regularity constant together with the condition and scale it
/// certifies. `condition` is one of "iii-A", "iii-B", "iii-C", "uniform";
/// method is "paper-formula" for closed-form or monotone-search constants
/// and "grid-search" for space-relative candidate scans. `extras` carries
/// auxiliary values (delta, phi, margin, resolution, ...).
struct RegularityCertificate {
    std::string condition;
    std::optional<std::string> anchor;
    double scale = 0.0;  // the epsilon or k the certificate refers to
    double value = 0.0;  // the certified phi, r, or delta-derived constant
    std::string method;
    double margin = 0.0;
    double resolution = 0.0;  // 0 for exact-over-candidate-set searches
    std::map<std::string, double> extras;
};

/// Monotone-predicate search range: geometric sweep over [lo, hi] by
/// doubling, then bisection until the bracket's relative width drops to
/// `resolution`. The returned value is the verified-true lower end, so for
/// predicates induced by a monotone function the certificate extends from
/// the grid to the continuum below it.
struct SearchSchedule {
    double lo = 0x1p-20;
    double hi = 0x1p10;
    double resolution = 0x1p-20;
};

/// Largest value in [schedule.lo, schedule.hi] satisfying `pred`, assuming
/// pred is monotone non-increasing (true on a lower interval). Throws
/// SearchError when even schedule.lo fails; returns schedule.hi when
/// nothing in the sweep fails.
double monotone_search(const SearchSchedule& schedule,
                       const std::function<bool(double)>& pred);

/// Niemytski-Wilson (iii-A) at a fixed anchor: the largest candidate phi
/// (distinct positive distances plus their consecutive midpoints) with
/// d(a,b) < phi and d(b,c) < phi  =>  d(a,c) < eps
/// for all b, c, evaluated tolerance-strict. On valid spaces the smallest
/// candidate certifies vacuously, so the optional is populated; the
/// signature stays optional per the condition's statement.
std::optional<RegularityCertificate> locally_regular_phi(const core::DistanceSpace& space,
                                                         const std::string& anchor, double eps,
                                                         Tolerance tol = {});

/// Chittenden's uniform modulus: same candidate scan with the implication
/// quantified over all x, y, z. Equals the minimum of the per-anchor values
/// over the shared candidate set.
std::optional<RegularityCertificate> uniform_phi(const core::DistanceSpace& space, double eps,
                                                 Tolerance tol = {});

/// Uniform modulus from the control pair (f, alpha): delta is the largest
/// schedule value with f(t) < f(eps) - alpha for all t <= delta (monotone
/// search; f non-decreasing extends the guarantee below the grid), and the
/// certificate value is phi = delta/2. Extras carry delta, the margin
/// f(eps) - alpha - f(delta), and the resolution.
RegularityCertificate phi_from_f(const core::FParams& params, double eps,
                                 SearchSchedule schedule = {}, Tolerance tol = {});

/// The b-metric (iii-C) constant r = t/K.
RegularityCertificate r_for_b(const core::BParams& params, double t);

/// Replay of condition (iii-C) on a concrete space: for every b with
/// d(a,b) >= k and every c, require d(a,c) + d(b,c) >= r. Witness = first
/// violating (b,c).
core::Verdict verify_iiiC(const core::DistanceSpace& space, const std::string& anchor, double k,
                          double r, Tolerance tol = {});

/// The F-metric (iii-C) constant: largest r with f(t) < f(k) - alpha for
/// all t <= r, by the same monotone search as phi_from_f.
RegularityCertificate r_from_f(const core::FParams& params, double k,
                               SearchSchedule schedule = {}, Tolerance tol = {});

/// Continuity of theta at the origin, quantified: delta is the largest
/// schedule value with theta(delta,delta) < k (the corner binds by
/// monotonicity); the certificate value is delta/sqrt(2), the (iii-C)
/// constant for theta-metrics. Extras carry delta.
RegularityCertificate delta_theta_at_origin(const core::ThetaParams& theta, double k,
                                            SearchSchedule schedule = {}, Tolerance tol = {});

/// Replay of a uniform modulus on a concrete space: for every x, y, z with
/// d(x,y) < phi and d(y,z) < phi (tolerance-strict), require d(x,z) < eps.
/// Witness = first violating triple.
core::Verdict replay_uniform_phi(const core::DistanceSpace& space, double phi, double eps,
                                 Tolerance tol = {});

/// Condition (iii-B) on distance traces: once both d(a_n,a) and d(a_n,b_n)
/// stay below tol, d(b_n,a) must eventually stay below tol_prime
/// (default: tol). Sequence thresholds compare exactly; vacuous passes are
/// flagged in certificates.
core::Verdict check_iiiB(const core::SampledSequence& d_an_a,
                         const core::SampledSequence& d_an_bn,
                         const core::SampledSequence& d_bn_a, double tol,
                         std::optional<double> tol_prime = std::nullopt);

/// Existence cross-check of (iii-A) versus (iii-C) over anchors and scales
/// (k = eps). The conditions are equivalent in principle; on a finite space
/// a disagreement indicates a tolerance artifact to investigate, and the
/// witness names the anchor and scale.
core::Verdict cross_check_conditions(const core::DistanceSpace& space,
                                     const std::vector<double>& eps_grid, Tolerance tol = {});

}  // namespace metrikos::regularity
