#include <cmath>

#include "doctest.h"
#include "metrikos/axioms.hpp"
#include "metrikos/fuzz.hpp"
#include "oracles.hpp"

using namespace metrikos;
using namespace metrikos::fuzz;
using core::BParams;
using core::DistanceSpace;
using core::FParams;

TEST_CASE("family names round-trip") {
    CHECK(family_from_name("euclid") == SpaceFamily::Euclidean);
    CHECK(family_from_name("euclid2") == SpaceFamily::EuclideanSquared);
    CHECK(family_from_name("matrix") == SpaceFamily::RandomMatrix);
    CHECK(family_name(SpaceFamily::EuclideanSquared) == "euclid2");
    CHECK(family_name(family_from_name("euclid")) == "euclid");
    CHECK_THROWS_AS(family_from_name("hyperbolic"), InputError);
}

TEST_CASE("generated spaces are deterministic per (spec, trial)") {
    FuzzSpec spec;
    spec.seed = 99;
    auto a = generate_space(spec, 5);
    auto b = generate_space(spec, 5);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            CHECK(a.d(i, j) == b.d(i, j));  // bit-identical
        }
    }
    auto c = generate_space(spec, 6);
    bool all_equal = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (a.d(i, j) != c.d(i, j)) all_equal = false;
        }
    }
    CHECK_FALSE(all_equal);  // different trials draw different spaces
}

TEST_CASE("generated spaces satisfy the distance axioms in every family") {
    for (auto family :
         {SpaceFamily::Euclidean, SpaceFamily::EuclideanSquared, SpaceFamily::RandomMatrix}) {
        FuzzSpec spec;
        spec.family = family;
        spec.n_points = 7;
        spec.seed = 3;
        for (std::uint64_t trial = 0; trial < 20; ++trial) {
            auto space = generate_space(spec, trial);
            CAPTURE(family_name(family));
            CAPTURE(trial);
            CHECK(space.size() == 7);
            CHECK(core::check_distance_axioms(space).pass);
        }
    }
}

TEST_CASE("the squared family is the elementwise square of the euclidean one") {
    FuzzSpec spec;
    spec.seed = 12;
    spec.family = SpaceFamily::Euclidean;
    auto plain = generate_space(spec, 4);
    spec.family = SpaceFamily::EuclideanSquared;
    auto squared = generate_space(spec, 4);
    for (std::size_t i = 0; i < plain.size(); ++i) {
        for (std::size_t j = 0; j < plain.size(); ++j) {
            CHECK(squared.d(i, j) ==
                  doctest::Approx(plain.d(i, j) * plain.d(i, j)).epsilon(1e-12));
        }
    }
    // euclidean instances are genuine metrics
    CHECK(axioms::min_b_constant(plain) <= 1.0 + 1e-9);
    // squared instances satisfy the relaxed inequality at K = 2
    CHECK(axioms::check_b(squared, BParams{2.0}).pass);
}

TEST_CASE("matrix family entries stay in the documented range") {
    FuzzSpec spec;
    spec.family = SpaceFamily::RandomMatrix;
    spec.seed = 5;
    auto space = generate_space(spec, 0);
    for (std::size_t i = 0; i < space.size(); ++i) {
        CHECK(space.d(i, i) == 0.0);
        for (std::size_t j = 0; j < space.size(); ++j) {
            CHECK(space.d(i, j) == space.d(j, i));
            if (i != j) {
                CHECK(space.d(i, j) >= 0.1);
                CHECK(space.d(i, j) <= 10.0);
            }
        }
    }
}

TEST_CASE("shrink keeps the failure and minimizes the space") {
    // the chain condition for (ln t, 0) fails on squared instances
    auto checker = [](const DistanceSpace& s) {
        return axioms::check_f_metric(s, FParams{expr::ScalarFn::parse("ln(t)"), 0.0});
    };
    FuzzSpec spec;
    spec.seed = 21;
    spec.n_points = 7;
    DistanceSpace found = generate_space(spec, 0);
    std::uint64_t trial = 0;
    while (checker(found).pass) {
        found = generate_space(spec, ++trial);
        REQUIRE(trial < 50);
    }
    auto small = shrink(found, checker);
    CHECK_FALSE(checker(small).pass);
    CHECK(small.size() <= found.size());
    CHECK(small.size() >= 3);  // a chain violation needs an intermediate point
    CHECK(core::check_distance_axioms(small).pass);

    // shrinking a passing space is a contract violation
    auto ok = DistanceSpace::from_matrix({{0, 1}, {1, 0}});
    CHECK_THROWS_AS(shrink(ok, checker), InputError);
}

TEST_CASE("run_fuzz finds no violations for true invariants") {
    FuzzSpec spec;
    spec.seed = 7;
    spec.n_points = 6;
    auto outcome = run_fuzz(spec, 60, [](const DistanceSpace& s) {
        return axioms::check_b(s, BParams{2.0});
    });
    CHECK(outcome.trials == 60);
    CHECK(outcome.violations.empty());
}

TEST_CASE("run_fuzz reports shrunk violations in trial order") {
    FuzzSpec spec;
    spec.seed = 7;
    spec.n_points = 6;
    auto checker = [](const DistanceSpace& s) {
        return axioms::check_f_metric(s, FParams{expr::ScalarFn::parse("ln(t)"), 0.0});
    };
    auto outcome = run_fuzz(spec, 40, checker);
    CHECK_FALSE(outcome.violations.empty());
    std::uint64_t prev = 0;
    bool first = true;
    for (const auto& violation : outcome.violations) {
        if (!first) CHECK(violation.trial > prev);
        prev = violation.trial;
        first = false;
        // every reported space still fails, and its witness replays
        auto verdict = checker(violation.space);
        CHECK_FALSE(verdict.pass);
        CHECK(violation.witness.kind == "D3");
        CHECK(violation.space.size() >= 3);
    }

    // identical spec and trial count reproduce the outcome exactly
    auto again = run_fuzz(spec, 40, checker);
    REQUIRE(again.violations.size() == outcome.violations.size());
    for (std::size_t v = 0; v < again.violations.size(); ++v) {
        CHECK(again.violations[v].trial == outcome.violations[v].trial);
        CHECK(again.violations[v].witness.points == outcome.violations[v].witness.points);
        CHECK(again.violations[v].space.matrix().rows() ==
              outcome.violations[v].space.matrix().rows());
    }
}

TEST_CASE("uniform_unit is deterministic and lands in [0,1)") {
    std::mt19937_64 a(123), b(123);
    for (int i = 0; i < 100; ++i) {
        const double u = uniform_unit(a);
        CHECK(u == uniform_unit(b));
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}
