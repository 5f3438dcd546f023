#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "metrikos/core.hpp"

namespace metrikos::metrize {

/// Edge-weight transform applied before the chain construction.
struct WeightTransform {
    enum class Kind { Identity, Power, Custom };

    Kind kind = Kind::Identity;
    double epsilon = 1.0;  // Power only; must lie in (0, 1]
    expr::ScalarFn fn;     // Custom only
    std::string description = "identity";

    static WeightTransform identity();
    static WeightTransform power(double epsilon);
    static WeightTransform custom(expr::ScalarFn fn);

    double apply(double t) const;
};

/// Snowflake exponent for a relaxed-triangle coefficient:
/// eps = ln 2 / ln(2*max(K,1)), in (0,1], equal to 1 iff max(K,1) = 1.
/// Coefficients below 1 clamp to 1 so the exponent never exceeds 1.
double snowflake_exponent(double K);

struct PairBound {
    std::size_t i = 0, j = 0;
    double lower = 0.0;  // the constructed metric d(i,j)
    double upper = 0.0;  // h(D(i,j)), always >= lower
};

/// Explicit metric built by the all-pairs minimal chain sum over
/// transformed edge weights, with per-pair distortion bookkeeping.
struct ChainMetricResult {
    core::Matrix metric;
    WeightTransform transform;
    double max_distortion = 1.0;  // max over pairs of upper/lower
    std::size_t argmax_i = 0, argmax_j = 0;
    std::vector<PairBound> per_pair_bounds;
};

/// Minimal chain sums over h(D(u,v)). On a finite space with positive
/// off-diagonal distances the result is a genuine metric: positivity holds
/// because each chain between distinct points contains a positive edge and
/// the minimum over finitely many chains is attained. A custom transform is
/// validated on the space's positive distance values (positive outputs,
/// non-decreasing) before use.
ChainMetricResult chain_metric(const core::DistanceSpace& space,
                               const WeightTransform& transform, Tolerance tol = {});

/// Metric axioms on a raw matrix at certificate strength: zero diagonal,
/// symmetry, off-diagonal positivity, and the triangle inequality on all
/// triples, each at the given tolerance.
core::Verdict exact_metric_check(const core::Matrix& m, Tolerance tol = Tolerance{1e-9});

struct DistortionReport {
    double max_distortion = 1.0;
    std::size_t argmax_i = 0, argmax_j = 0;
    /// Set when BParams were supplied and the transform is the snowflake
    /// power for that K: whether max_distortion <= 4 held on this instance.
    /// An empirical expectation from the quasi-metric literature, recorded
    /// per instance and never asserted as a theorem.
    std::optional<bool> snowflake_within_4;
};

DistortionReport distortion_report(const ChainMetricResult& result,
                                   const core::DistanceSpace& space,
                                   const std::optional<core::BParams>& params = std::nullopt);

/// Least u in [bracket.first, bracket.second] with f(u) >= f(sp_value) +
/// alpha, by bisection on non-decreasing f. Returns the verified upper end
/// of the final bracket, so on spaces satisfying the chain condition with
/// strictly increasing f, every pair with minimal chain sum sp_value obeys
/// D(x,y) <= u. Throws SearchError when the bracket does not straddle the
/// target level; returns bracket.first when the level is already reached
/// there.
double f_upper_bound(const core::FParams& params, double sp_value,
                     std::pair<double, double> bracket, Tolerance tol = {});

/// f_upper_bound with an automatic bracket: lo = sp_value (f(lo) is below
/// the target by alpha >= 0), hi found by doubling.
double f_upper_bound_auto(const core::FParams& params, double sp_value, Tolerance tol = {});

}  // namespace metrikos::metrize
