#include <cmath>

#include "doctest.h"
#include "metrikos/core.hpp"
#include "oracles.hpp"

using namespace metrikos;
using namespace metrikos::core;

TEST_CASE("Matrix round trip and validation") {
    Matrix m = Matrix::from_rows({{0, 1}, {1, 0}});
    CHECK(m.side() == 2);
    CHECK(m(0, 1) == 1.0);
    CHECK(m.rows() == std::vector<std::vector<double>>{{0, 1}, {1, 0}});
    CHECK_THROWS_AS(Matrix::from_rows({{0, 1}, {1}}), InputError);       // ragged
    CHECK_THROWS_AS(Matrix::from_rows({{0, 1, 2}, {1, 0, 1}}), InputError);  // non-square
}

TEST_CASE("DistanceSpace construction and lookups") {
    auto space = DistanceSpace::from_matrix({{0, 1, 4}, {1, 0, 1}, {4, 1, 0}});
    CHECK(space.size() == 3);
    CHECK(space.labels() == std::vector<std::string>{"p0", "p1", "p2"});
    CHECK(space.d(0, 2) == 4.0);
    CHECK(space.index_of("p1") == 1);
    CHECK_THROWS_AS(space.index_of("zzz"), InputError);

    auto named = DistanceSpace::from_matrix({"a", "b"}, {{0, 2}, {2, 0}});
    CHECK(named.label(1) == "b");
    CHECK_THROWS_AS(DistanceSpace::from_matrix({"a", "a"}, {{0, 1}, {1, 0}}), InputError);
    CHECK_THROWS_AS(DistanceSpace::from_matrix({"a"}, {{0, 1}, {1, 0}}), InputError);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(DistanceSpace::from_matrix({{0, inf}, {inf, 0}}), InputError);
    CHECK_THROWS_AS(DistanceSpace::from_matrix({{0, std::nan("")}, {std::nan(""), 0}}),
                    InputError);
}

TEST_CASE("distance value helpers") {
    auto space = DistanceSpace::from_matrix({{0, 1, 4}, {1, 0, 1}, {4, 1, 0}});
    CHECK(space.positive_distance_values() == std::vector<double>{1.0, 4.0});
    CHECK(space.max_distance() == 4.0);

    auto scaled = space.scaled(2.5);
    CHECK(scaled.d(0, 2) == 10.0);
    CHECK(scaled.labels() == space.labels());

    auto sub = space.restricted({0, 2});
    CHECK(sub.size() == 2);
    CHECK(sub.d(0, 1) == 4.0);
    CHECK(sub.label(1) == "p2");
}

TEST_CASE("distance axioms: passes and first-violation witnesses") {
    auto good = DistanceSpace::from_matrix({{0, 1, 4}, {1, 0, 1}, {4, 1, 0}});
    CHECK(check_distance_axioms(good).pass);

    auto diag = check_distance_axioms(DistanceSpace::from_matrix({{0.5, 1}, {1, 0}}));
    REQUIRE_FALSE(diag.pass);
    CHECK(diag.witness->kind == "identity");
    CHECK(diag.witness->points == std::vector<std::string>{"p0", "p0"});

    auto asym = check_distance_axioms(DistanceSpace::from_matrix({{0, 1}, {2, 0}}));
    REQUIRE_FALSE(asym.pass);
    CHECK(asym.witness->kind == "symmetry");
    CHECK(asym.witness->points == std::vector<std::string>{"p0", "p1"});

    auto zero = check_distance_axioms(
        DistanceSpace::from_matrix({{0, 0, 1}, {0, 0, 1}, {1, 1, 0}}));
    REQUIRE_FALSE(zero.pass);
    CHECK(zero.witness->kind == "positivity");

    auto neg = check_distance_axioms(DistanceSpace::from_matrix({{0, -1}, {-1, 0}}));
    CHECK_FALSE(neg.pass);
}

TEST_CASE("sampled analytic spaces") {
    auto sq = expr::BinaryFn::parse("(x-y)^2", "x", "y");
    auto space = sample_space({0.0, 1.0, 2.0}, sq);
    CHECK(space.labels() == std::vector<std::string>{"0", "1", "2"});
    CHECK(space.matrix().rows() ==
          std::vector<std::vector<double>>{{0, 1, 4}, {1, 0, 1}, {4, 1, 0}});

    // space_from_points gates on the distance axioms
    CHECK_NOTHROW(space_from_points({0.0, 1.0, 2.0}, sq));
    CHECK_THROWS_AS(space_from_points({0.0, 1.0, 1.0}, sq), InputError);  // duplicate point

    // asymmetric formula is loadable via sample_space but fails the axioms
    auto asym = sample_space({1.0, 2.0}, expr::BinaryFn::parse("x-y+1", "x", "y"));
    CHECK_FALSE(check_distance_axioms(asym).pass);
    CHECK_THROWS_AS(space_from_points({1.0, 2.0}, expr::BinaryFn::parse("x-y+1", "x", "y")),
                    InputError);
}

TEST_CASE("Verdict constructors and heuristic marker") {
    auto ok = Verdict::ok({{"K_min", 2.0}});
    CHECK(ok.pass);
    CHECK_FALSE(ok.witness.has_value());
    CHECK(ok.certificates.at("K_min") == 2.0);
    CHECK_FALSE(ok.heuristic());

    auto fail = Verdict::fail(Witness{"b-triangle", {"a", "b", "c"}, 4.0, 2.0, "lhs > rhs"});
    CHECK_FALSE(fail.pass);
    CHECK(fail.witness->points.size() == 3);

    auto h = Verdict::ok({{"heuristic", 1.0}});
    CHECK(h.heuristic());
}

TEST_CASE("Tolerance comparison semantics") {
    Tolerance tol;  // rel = 1e-9
    // strict <: a must clear b by the slack
    CHECK(tol.lt_strict(1.0 - 2e-9, 1.0));
    CHECK_FALSE(tol.lt_strict(1.0 - 0.5e-9, 1.0));
    CHECK_FALSE(tol.lt_strict(1.0, 1.0));
    // lenient <=: ties and slack-sized overshoots pass
    CHECK(tol.leq(1.0, 1.0));
    CHECK(tol.leq(1.0 + 5e-10, 1.0));
    CHECK_FALSE(tol.leq(1.0 + 5e-9, 1.0));
    CHECK(tol.geq(1.0 - 5e-10, 1.0));
    CHECK(tol.eq(1.0, 1.0 + 5e-10));
    // slack floors at rel for references below 1
    CHECK(tol.slack(0.001) == 1e-9);
    CHECK(tol.slack(100.0) == doctest::Approx(1e-7));
}

TEST_CASE("SampledSequence carries name and values") {
    SampledSequence s{"d(a_n,a)", {1.0, 0.5, 0.25}};
    CHECK(s.name == "d(a_n,a)");
    CHECK(s.values.size() == 3);
}

TEST_CASE("oracle generators produce valid spaces") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        auto space = oracles::random_space(seed, 6);
        CHECK(check_distance_axioms(space).pass);
    }
}
