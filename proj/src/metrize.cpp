#include "metrikos/metrize.hpp"

#include <algorithm>
#include <cmath>

#include "metrikos/axioms.hpp"

namespace metrikos::metrize {

using core::DistanceSpace;
using core::Matrix;
using core::Verdict;
using core::Witness;

WeightTransform WeightTransform::identity() { return WeightTransform{}; }

WeightTransform WeightTransform::power(double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw InputError("power transform exponent must lie in (0, 1]");
    }
    WeightTransform t;
    t.kind = Kind::Power;
    t.epsilon = epsilon;
    t.description = "power:" + format_number(epsilon);
    return t;
}

WeightTransform WeightTransform::custom(expr::ScalarFn fn) {
    WeightTransform t;
    t.kind = Kind::Custom;
    t.description = "custom:" + fn.source();
    t.fn = std::move(fn);
    return t;
}

double WeightTransform::apply(double t) const {
    switch (kind) {
        case Kind::Identity: return t;
        case Kind::Power: return std::pow(t, epsilon);
        case Kind::Custom: return fn(t);
    }
    throw InputError("unknown transform kind");
}

double snowflake_exponent(double K) {
    if (!(K > 0.0) || !std::isfinite(K)) throw InputError("K must be positive and finite");
    const double clamped = std::max(K, 1.0);
    return std::log(2.0) / std::log(2.0 * clamped);
}

ChainMetricResult chain_metric(const DistanceSpace& space, const WeightTransform& transform,
                               Tolerance tol) {
    const std::size_t n = space.size();
    if (transform.kind == WeightTransform::Kind::Custom) {
        const std::vector<double> values = space.positive_distance_values();
        double prev = 0.0;
        bool have_prev = false;
        for (double v : values) {
            const double hv = transform.apply(v);
            if (!std::isfinite(hv) || !(hv > 0.0)) {
                throw InputError("custom transform maps " + format_number(v) +
                                 " to a nonpositive or non-finite weight");
            }
            if (have_prev && !tol.leq(prev, hv)) {
                throw InputError("custom transform is not non-decreasing at " +
                                 format_number(v));
            }
            prev = hv;
            have_prev = true;
        }
    }

    Matrix weights(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double w = transform.apply(space.d(i, j));
            if (!std::isfinite(w) || !(w > 0.0)) {
                throw InputError("transform produced a nonpositive weight on edge (" +
                                 space.label(i) + ", " + space.label(j) + ")");
            }
            weights(i, j) = w;
        }
    }

    ChainMetricResult result;
    result.transform = transform;
    {
        DistanceSpace weighted(space.labels(), weights);
        result.metric = axioms::all_pairs_min_chain(weighted).matrix();
    }
    result.max_distortion = 1.0;
    if (n >= 2) {
        result.argmax_i = 0;
        result.argmax_j = 1;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            PairBound pb;
            pb.i = i;
            pb.j = j;
            pb.lower = result.metric(i, j);
            pb.upper = weights(i, j);
            const double ratio = pb.upper / pb.lower;
            if (ratio > result.max_distortion) {
                result.max_distortion = ratio;
                result.argmax_i = i;
                result.argmax_j = j;
            }
            result.per_pair_bounds.push_back(pb);
        }
    }
    return result;
}

Verdict exact_metric_check(const Matrix& m, Tolerance tol) {
    const std::size_t n = m.side();
    auto label = [](std::size_t i) { return "#" + std::to_string(i); };
    for (std::size_t i = 0; i < n; ++i) {
        if (!tol.eq(m(i, i), 0.0)) {
            return Verdict::fail(
                Witness{"identity", {label(i), label(i)}, m(i, i), 0.0, "d(x,x) != 0"});
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!tol.eq(m(i, j), m(j, i))) {
                return Verdict::fail(Witness{
                    "symmetry", {label(i), label(j)}, m(i, j), m(j, i), "d(x,y) != d(y,x)"});
            }
            if (!tol.lt_strict(0.0, m(i, j))) {
                return Verdict::fail(Witness{"positivity",
                                             {label(i), label(j)},
                                             m(i, j),
                                             0.0,
                                             "d(x,y) <= 0 for x != y"});
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                const double rhs = m(i, k) + m(k, j);
                if (!tol.leq(m(i, j), rhs)) {
                    return Verdict::fail(Witness{"triangle",
                                                 {label(i), label(k), label(j)},
                                                 m(i, j),
                                                 rhs,
                                                 "d(x,z) > d(x,y)+d(y,z)"});
                }
            }
        }
    }
    return Verdict::ok();
}

DistortionReport distortion_report(const ChainMetricResult& result, const DistanceSpace& space,
                                   const std::optional<core::BParams>& params) {
    if (result.metric.side() != space.size()) {
        throw InputError("result and space dimensions do not match");
    }
    DistortionReport report;
    report.max_distortion = result.max_distortion;
    report.argmax_i = result.argmax_i;
    report.argmax_j = result.argmax_j;
    if (params && result.transform.kind == WeightTransform::Kind::Power) {
        const double expected = snowflake_exponent(params->K);
        if (std::fabs(result.transform.epsilon - expected) <=
            1e-12 * std::max(1.0, expected)) {
            report.snowflake_within_4 = result.max_distortion <= 4.0;
        }
    }
    return report;
}

double f_upper_bound(const core::FParams& params, double sp_value,
                     std::pair<double, double> bracket, Tolerance tol) {
    if (!(sp_value > 0.0) || !std::isfinite(sp_value)) {
        throw InputError("sp_value must be positive and finite");
    }
    double lo = bracket.first, hi = bracket.second;
    if (!(lo > 0.0) || !(lo <= hi) || !std::isfinite(hi)) {
        throw InputError("bracket needs 0 < lo <= hi, both finite");
    }
    const double target = params.f(sp_value) + params.alpha;
    if (params.f(lo) >= target) return lo;
    if (!(params.f(hi) >= target)) {
        throw SearchError("bracket does not straddle the target level f(" +
                          format_number(sp_value) + ")+alpha");
    }
    // Invariant: f(lo) < target <= f(hi). The returned upper end certifies
    // f(u) >= target as evaluated.
    for (int it = 0; it < 200 && hi - lo > tol.rel * std::max(1.0, lo); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (params.f(mid) >= target ? hi : lo) = mid;
    }
    return hi;
}

double f_upper_bound_auto(const core::FParams& params, double sp_value, Tolerance tol) {
    if (!(sp_value > 0.0) || !std::isfinite(sp_value)) {
        throw InputError("sp_value must be positive and finite");
    }
    const double target = params.f(sp_value) + params.alpha;
    if (params.f(sp_value) >= target) return sp_value;  // alpha == 0
    double hi = sp_value * 2.0;
    for (int it = 0; it < 64; ++it) {
        if (params.f(hi) >= target) {
            return f_upper_bound(params, sp_value, {sp_value, hi}, tol);
        }
        hi *= 2.0;
    }
    throw SearchError("no upper bound below 2^64 * sp reaches f(sp)+alpha");
}

}  // namespace metrikos::metrize
