#include "metrikos/fuzz.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <optional>
#include <thread>

namespace metrikos::fuzz {

using core::DistanceSpace;
using core::Matrix;

SpaceFamily family_from_name(const std::string& name) {
    if (name == "euclid") return SpaceFamily::Euclidean;
    if (name == "euclid2") return SpaceFamily::EuclideanSquared;
    if (name == "matrix") return SpaceFamily::RandomMatrix;
    throw InputError("unknown space family '" + name + "' (euclid | euclid2 | matrix)");
}

std::string family_name(SpaceFamily family) {
    switch (family) {
        case SpaceFamily::Euclidean: return "euclid";
        case SpaceFamily::EuclideanSquared: return "euclid2";
        case SpaceFamily::RandomMatrix: return "matrix";
    }
    return "unknown";
}

double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace {

void validate_spec(const FuzzSpec& spec) {
    if (spec.n_points < 1 || spec.n_points > 64) {
        throw InputError("n_points must lie in [1, 64]");
    }
    if (spec.dim < 1 || spec.dim > 8) throw InputError("dim must lie in [1, 8]");
    if (!(spec.box > 0.0) || !std::isfinite(spec.box)) throw InputError("box must be positive");
}

DistanceSpace point_family_space(const FuzzSpec& spec, std::mt19937_64& rng, bool squared) {
    const std::size_t n = spec.n_points;
    const double min_sep = 1e-3;
    std::vector<std::vector<double>> pts;
    pts.reserve(n);
    int attempts = 0;
    while (pts.size() < n) {
        if (++attempts > 10000) throw InputError("could not place separated points in the box");
        std::vector<double> p(spec.dim);
        for (auto& c : p) c = uniform_unit(rng) * spec.box;
        bool ok = true;
        for (const auto& q : pts) {
            double s2 = 0.0;
            for (int d = 0; d < spec.dim; ++d) s2 += (p[d] - q[d]) * (p[d] - q[d]);
            if (s2 < min_sep * min_sep) {
                ok = false;
                break;
            }
        }
        if (ok) pts.push_back(std::move(p));
    }
    Matrix m(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s2 = 0.0;
            for (int d = 0; d < spec.dim; ++d) s2 += (pts[i][d] - pts[j][d]) * (pts[i][d] - pts[j][d]);
            const double v = squared ? s2 : std::sqrt(s2);
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    return DistanceSpace(std::move(labels), std::move(m));
}

DistanceSpace matrix_family_space(const FuzzSpec& spec, std::mt19937_64& rng) {
    const std::size_t n = spec.n_points;
    Matrix raw(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) raw(i, j) = 0.1 + uniform_unit(rng) * 9.9;
        }
    }
    // Repair: symmetrize by averaging, zero the diagonal. Entries stay in
    // [0.1, 10], so off-diagonal positivity cannot be lost.
    Matrix m(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (raw(i, j) + raw(j, i));
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    return DistanceSpace(std::move(labels), std::move(m));
}

}  // namespace

DistanceSpace generate_space(const FuzzSpec& spec, std::uint64_t trial) {
    validate_spec(spec);
    std::mt19937_64 rng(spec.seed + trial);
    switch (spec.family) {
        case SpaceFamily::Euclidean: return point_family_space(spec, rng, false);
        case SpaceFamily::EuclideanSquared: return point_family_space(spec, rng, true);
        case SpaceFamily::RandomMatrix: return matrix_family_space(spec, rng);
    }
    throw InputError("unknown space family");
}

DistanceSpace shrink(const DistanceSpace& space, const Checker& checker) {
    if (checker(space).pass) throw InputError("shrink requires a failing space");
    DistanceSpace current = space;

    // Phase 1: drop points while the failure survives.
    bool progressed = true;
    while (progressed && current.size() > 2) {
        progressed = false;
        for (std::size_t drop = 0; drop < current.size(); ++drop) {
            std::vector<std::size_t> keep;
            for (std::size_t i = 0; i < current.size(); ++i) {
                if (i != drop) keep.push_back(i);
            }
            DistanceSpace candidate = current.restricted(keep);
            bool still_fails = false;
            try {
                still_fails = !checker(candidate).pass;
            } catch (const std::exception&) {
                still_fails = false;
            }
            if (still_fails) {
                current = std::move(candidate);
                progressed = true;
                break;
            }
        }
    }

    // Phase 2: round entries toward round numbers, coarsest first.
    const std::size_t n = current.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double original = current.d(i, j);
            for (int decimals = 0; decimals <= 6; ++decimals) {
                const double scale = std::pow(10.0, decimals);
                const double rounded = std::round(original * scale) / scale;
                if (rounded == original) break;
                if (!(rounded > 0.0)) continue;
                auto rows = current.matrix().rows();
                rows[i][j] = rounded;
                rows[j][i] = rounded;
                try {
                    DistanceSpace candidate(current.labels(), Matrix::from_rows(rows));
                    if (core::check_distance_axioms(candidate).pass &&
                        !checker(candidate).pass) {
                        current = std::move(candidate);
                        break;
                    }
                } catch (const std::exception&) {
                }
            }
        }
    }
    return current;
}

FuzzOutcome run_fuzz(const FuzzSpec& spec, std::uint64_t trials, const Checker& checker) {
    if (trials < 1) throw InputError("trial count must be at least 1");
    validate_spec(spec);

    // Trials are independent (per-trial seed = seed + trial) and the checker
    // is a pure function of its argument, so trials run on a small worker
    // pool. Results land in per-trial slots and merge in trial order, which
    // keeps the outcome identical to a sequential run.
    std::vector<std::optional<FuzzViolation>> slots(trials);
    std::vector<std::exception_ptr> errors(trials);
    std::atomic<std::uint64_t> cursor{0};

    auto worker = [&]() {
        for (;;) {
            const std::uint64_t t = cursor.fetch_add(1);
            if (t >= trials) return;
            try {
                DistanceSpace space = generate_space(spec, t);
                core::Verdict verdict = checker(space);
                if (verdict.pass) continue;
                DistanceSpace small = shrink(space, checker);
                core::Verdict small_verdict = checker(small);
                // Shrinking preserves failure by construction.
                slots[t] = FuzzViolation{t, std::move(small), *small_verdict.witness};
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };

    const unsigned hw = std::thread::hardware_concurrency();
    const std::uint64_t want = std::min<std::uint64_t>(trials, hw == 0 ? 1 : hw);
    if (want <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(want));
        for (std::uint64_t i = 0; i < want; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (std::uint64_t t = 0; t < trials; ++t) {
        if (errors[t]) std::rethrow_exception(errors[t]);
    }

    FuzzOutcome outcome;
    outcome.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        if (slots[t]) outcome.violations.push_back(std::move(*slots[t]));
    }
    return outcome;
}

}  // namespace metrikos::fuzz
