#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "metrikos/core.hpp"

namespace metrikos::fuzz {

enum class SpaceFamily { Euclidean, EuclideanSquared, RandomMatrix };

SpaceFamily family_from_name(const std::string& name);  // euclid | euclid2 | matrix
std::string family_name(SpaceFamily family);

/// Generator parameters. Trial t draws from an RNG seeded with seed + t, so
/// trials are independent of each other and of execution order.
struct FuzzSpec {
    SpaceFamily family = SpaceFamily::EuclideanSquared;
    std::size_t n_points = 6;
    std::uint64_t seed = 0;
    int dim = 2;         // point families only
    double box = 10.0;   // coordinate range [0, box]
};

/// Deterministic space for (spec, trial). Point families sample coordinates
/// uniformly in the box with a minimum pairwise separation; the matrix
/// family draws symmetric entries in [0.1, 10] (symmetrized by averaging,
/// zero diagonal), which keeps every instance a valid distance space.
core::DistanceSpace generate_space(const FuzzSpec& spec, std::uint64_t trial);

using Checker = std::function<core::Verdict(const core::DistanceSpace&)>;

struct FuzzViolation {
    std::uint64_t trial = 0;
    core::DistanceSpace space;  // shrunk
    core::Witness witness;      // from the shrunk space
};

struct FuzzOutcome {
    std::uint64_t trials = 0;
    std::vector<FuzzViolation> violations;
};

/// Shrink a failing space: greedily drop points while the checker still
/// fails, then round surviving entries to the coarsest decimals that keep
/// both the failure and validity. The input must fail the checker.
core::DistanceSpace shrink(const core::DistanceSpace& space, const Checker& checker);

/// Run `trials` generated spaces through the checker, shrinking every
/// failure. Deterministic for a fixed spec.
FuzzOutcome run_fuzz(const FuzzSpec& spec, std::uint64_t trials, const Checker& checker);

/// Uniform double in [0, 1) from the top 53 bits of the generator, so the
/// stream does not depend on the standard library's distribution
/// implementation.
double uniform_unit(std::mt19937_64& rng);

}  // namespace metrikos::fuzz
