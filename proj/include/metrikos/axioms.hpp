#pragma once

#include <cstdint>
#include <vector>

#include "metrikos/core.hpp"

namespace metrikos::axioms {

/// All-pairs minimal chain sums: sp(i,j) = minimum over all point chains
/// u_1=i, ..., u_N=j (N >= 2) of the summed edge distances. Because edge
/// weights are positive, repeated visits never lower a sum, so simple paths
/// realize the minimum and Floyd-Warshall computes it. Chains are
/// reconstructable per pair.
class SpMatrix {
public:
    static SpMatrix compute(const core::DistanceSpace& space);

    std::size_t side() const { return sp_.side(); }
    double sp(std::size_t i, std::size_t j) const { return sp_(i, j); }
    const core::Matrix& matrix() const { return sp_; }

    /// A chain realizing sp(i,j), as point indices starting at i and ending
    /// at j. For i == j returns the singleton {i}.
    std::vector<std::size_t> chain(std::size_t i, std::size_t j) const;

private:
    core::Matrix sp_;
    std::vector<std::size_t> next_;  // next_[i*n+j]: first hop from i toward j
};

SpMatrix all_pairs_min_chain(const core::DistanceSpace& space);

/// Smallest coefficient K for which the relaxed triangle inequality
/// d(x,z) <= K*(d(x,y)+d(y,z)) holds on every ordered triple. For a single
/// point returns 1 by convention; with >= 2 points the result is >= 1
/// because the triple y = x forces ratio 1.
double min_b_constant(const core::DistanceSpace& space);

/// min_b_constant together with the lexicographically first triple (x,y,z)
/// realizing the maximal ratio d(x,z)/(d(x,y)+d(y,z)).
struct BAnalysis {
    double K_min = 1.0;
    std::size_t x = 0, y = 0, z = 0;
};
BAnalysis min_b_analysis(const core::DistanceSpace& space);

/// Relaxed triangle inequality at the given K. Pass iff K >= K_min up to
/// tolerance; on failure the witness is the maximal-ratio triple.
/// Certificates always carry "K_min" and the signed margin K - K_min.
core::Verdict check_b(const core::DistanceSpace& space, const core::BParams& params,
                      Tolerance tol = {});

/// Chain condition (D3): for every pair x != y with d(x,y) > 0,
/// f(d(x,y)) <= f(sp(x,y)) + alpha. Quantification over all chains reduces
/// to the minimal chain sum because f is non-decreasing. The witness for a
/// violating pair stores a realizing minimal chain (first label = x, last
/// label = y).
core::Verdict check_f_metric(const core::DistanceSpace& space, const core::FParams& params,
                             Tolerance tol = {});

/// Condition (F1): f non-decreasing along a strictly increasing positive
/// grid. Witness = first violating adjacent pair.
core::Verdict check_f1_monotone(const expr::ScalarFn& f, const std::vector<double>& grid,
                                Tolerance tol = {});

/// Geometric grid 1e-6 ... 1e3, ten points per decade.
std::vector<double> default_f1_grid();

/// Geometric decay schedule t_k = t0 * q^k for the (F2) walk.
struct DecaySchedule {
    double t0 = 1.0;
    double q = 0.1;
};

/// Condition (F2), heuristic: walk the decay schedule until t underflows
/// the working range and require f to (a) be non-increasing on the tail of
/// the walk and (b) drop below M successively lower thresholds. Thresholds
/// are -10^m when the observed total drop W reaches 10^M, otherwise scaled
/// to -B^m with B = W^(1/M) so the deepest threshold equals the observed
/// minimum. Certificates carry "heuristic", the drop W, the threshold base,
/// and the walk length. A verdict from this check never proves (F2) over
/// the continuum.
core::Verdict check_f2_limit(const expr::ScalarFn& f, DecaySchedule schedule,
                             int threshold_drops, Tolerance tol = {});

/// {0} followed by the geometric grid 2^-10 ... 2^4 (16 values).
std::vector<double> default_action_grid();

/// Midpoint refinement: inserts the midpoint of every consecutive pair.
std::vector<double> refine_grid(const std::vector<double>& grid);

/// B-action axioms (i), (ii), (iv) on the grid, the decidable part.
/// (i) theta(0,0) = 0 and symmetry on all grid pairs.
/// (ii) strict monotonicity. A fixed list of unit-scale probe tuples is
///     checked first so that degenerate actions produce grid-independent
///     witnesses; the exhaustive part then checks single-coordinate grid
///     steps, which covers every dominated grid 4-tuple because
///     tolerance-strict < chains transitively along axis walks.
/// (iv) theta(s,0) <= s for all grid s > 0.
core::Verdict check_b_action_axioms(const core::ThetaParams& theta,
                                    const std::vector<double>& grid, Tolerance tol = {});

/// B-action axiom (iii), heuristic: for sampled image values m = theta(s0,t0)
/// and grid t in [0,m], bisection-solve theta(s,t) = m for s in [0,m],
/// relying on monotonicity in s. Pass iff endpoints bracket the level and
/// the bisection residual stays within tolerance. Certificates carry
/// "heuristic", the sample count, and the worst residual.
core::Verdict check_b_action_solvability(const core::ThetaParams& theta,
                                         const std::vector<double>& grid, Tolerance tol = {});

/// All four B-action axioms: the axioms part, then solvability. The
/// combined verdict inherits the "heuristic" marker from axiom (iii).
core::Verdict check_b_action(const core::ThetaParams& theta, const std::vector<double>& grid,
                             Tolerance tol = {});

/// theta-triangle inequality d(x,z) <= theta(d(x,y), d(y,z)) on all ordered
/// triples; witness = lexicographically first maximal violation.
core::Verdict check_theta_metric(const core::DistanceSpace& space,
                                 const core::ThetaParams& theta, Tolerance tol = {});

/// Left fold theta(...theta(theta(v1,v2),v3)..., vN); a singleton returns
/// its sole element. For theta = "s+t" this is the plain sum.
double theta_fold(const core::ThetaParams& theta, const std::vector<double>& values);

/// Iterated triangle bound along a concrete chain of labels:
/// d(first,last) <= theta_fold(edge distances).
core::Verdict check_chain_bound(const core::DistanceSpace& space, const core::ThetaParams& theta,
                                const std::vector<std::string>& chain, Tolerance tol = {});

}  // namespace metrikos::axioms
