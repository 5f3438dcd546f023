#include <cmath>

#include "doctest.h"
#include "metrikos/axioms.hpp"
#include "metrikos/metrize.hpp"
#include "oracles.hpp"

using namespace metrikos;
using namespace metrikos::metrize;
using core::BParams;
using core::DistanceSpace;
using core::FParams;

namespace {

DistanceSpace squared_line() {
    return DistanceSpace::from_matrix({{0, 1, 4}, {1, 0, 1}, {4, 1, 0}});
}

DistanceSpace unit_line() {
    return DistanceSpace::from_matrix({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
}

}  // namespace

TEST_CASE("weight transforms") {
    auto id = WeightTransform::identity();
    CHECK(id.apply(3.5) == 3.5);
    CHECK(id.description == "identity");

    auto pw = WeightTransform::power(0.5);
    CHECK(pw.apply(4.0) == 2.0);
    CHECK(pw.description.find("0.5") != std::string::npos);
    CHECK(WeightTransform::power(1.0).apply(7.0) == 7.0);
    CHECK_THROWS_AS(WeightTransform::power(0.0), InputError);
    CHECK_THROWS_AS(WeightTransform::power(1.5), InputError);
    CHECK_THROWS_AS(WeightTransform::power(-0.5), InputError);

    auto cu = WeightTransform::custom(expr::ScalarFn::parse("sqrt(t)"));
    CHECK(cu.apply(9.0) == 3.0);
}

TEST_CASE("snowflake exponent") {
    CHECK(snowflake_exponent(2.0) == doctest::Approx(0.5));
    CHECK(snowflake_exponent(1.0) == 1.0);
    CHECK(snowflake_exponent(0.5) == 1.0);  // sub-unit coefficients clamp
    CHECK(snowflake_exponent(8.0) == doctest::Approx(std::log(2.0) / std::log(16.0)));
    for (double K : {1.0, 1.5, 2.0, 4.0, 10.0}) {
        const double e = snowflake_exponent(K);
        CHECK(e > 0.0);
        CHECK(e <= 1.0);
    }
}

TEST_CASE("chain metric with identity transform is idempotent on metrics") {
    auto result = chain_metric(unit_line(), WeightTransform::identity());
    CHECK(result.metric.rows() == unit_line().matrix().rows());
    CHECK(result.max_distortion == 1.0);
    CHECK(exact_metric_check(result.metric).pass);
    // the distortion argmax is a genuine pair even when all ratios are 1
    CHECK(result.argmax_i != result.argmax_j);
}

TEST_CASE("snowflake chain metric on the squared line is the unit line") {
    auto result = chain_metric(squared_line(), WeightTransform::power(0.5));
    CHECK(result.metric.rows() == unit_line().matrix().rows());
    CHECK(result.max_distortion == 1.0);
    CHECK(exact_metric_check(result.metric).pass);

    // per-pair bounds: lower is the constructed metric, upper the
    // transformed direct distance
    for (const auto& bound : result.per_pair_bounds) {
        CHECK(bound.lower == result.metric(bound.i, bound.j));
        CHECK(bound.upper == doctest::Approx(std::sqrt(squared_line().d(bound.i, bound.j))));
        CHECK(bound.upper >= bound.lower);
    }
    CHECK(result.per_pair_bounds.size() == 3);  // unordered pairs of 3 points
}

TEST_CASE("chain metric equals the minimal chain sum over transformed weights") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto space = oracles::random_space(seed, 6);
        auto result = chain_metric(space, WeightTransform::power(0.7));
        // oracle: transform every edge, then enumerate simple paths
        std::vector<std::vector<double>> rows(space.size(),
                                              std::vector<double>(space.size(), 0.0));
        for (std::size_t i = 0; i < space.size(); ++i) {
            for (std::size_t j = 0; j < space.size(); ++j) {
                if (i != j) rows[i][j] = std::pow(space.d(i, j), 0.7);
            }
        }
        auto transformed = DistanceSpace::from_matrix(rows);
        for (std::size_t i = 0; i < space.size(); ++i) {
            for (std::size_t j = 0; j < space.size(); ++j) {
                CAPTURE(seed);
                CHECK(result.metric(i, j) ==
                      doctest::Approx(oracles::min_chain_exhaustive(transformed, i, j))
                          .epsilon(1e-12));
            }
        }
        CHECK(exact_metric_check(result.metric).pass);
    }
}

TEST_CASE("custom transforms are validated on the space's distance values") {
    auto space = unit_line();
    CHECK_NOTHROW(chain_metric(space, WeightTransform::custom(expr::ScalarFn::parse("sqrt(t)"))));
    // nonpositive outputs are rejected
    CHECK_THROWS_AS(chain_metric(space, WeightTransform::custom(expr::ScalarFn::parse("0-t"))),
                    InputError);
    // decreasing transforms are rejected
    CHECK_THROWS_AS(chain_metric(space, WeightTransform::custom(expr::ScalarFn::parse("1/t"))),
                    InputError);
}

TEST_CASE("exact_metric_check verdicts") {
    CHECK(exact_metric_check(unit_line().matrix()).pass);

    auto triangle = exact_metric_check(core::Matrix::from_rows({{0, 1, 4}, {1, 0, 1}, {4, 1, 0}}));
    REQUIRE_FALSE(triangle.pass);
    CHECK(triangle.witness->kind == "triangle");

    auto diag = exact_metric_check(core::Matrix::from_rows({{1, 1}, {1, 0}}));
    REQUIRE_FALSE(diag.pass);
    CHECK(diag.witness->kind == "identity");

    auto asym = exact_metric_check(core::Matrix::from_rows({{0, 1}, {2, 0}}));
    REQUIRE_FALSE(asym.pass);
    CHECK(asym.witness->kind == "symmetry");

    auto zero = exact_metric_check(core::Matrix::from_rows({{0, 0}, {0, 0}}));
    REQUIRE_FALSE(zero.pass);
    CHECK(zero.witness->kind == "positivity");
}

TEST_CASE("distortion report and the snowflake expectation flag") {
    auto space = squared_line();
    const double K = axioms::min_b_constant(space);
    auto result = chain_metric(space, WeightTransform::power(snowflake_exponent(K)));
    auto report = distortion_report(result, space, BParams{K});
    CHECK(report.max_distortion == result.max_distortion);
    REQUIRE(report.snowflake_within_4.has_value());
    CHECK(*report.snowflake_within_4);

    // without BParams the flag stays unset
    auto plain = distortion_report(result, space);
    CHECK_FALSE(plain.snowflake_within_4.has_value());

    // with a transform that is not the snowflake power the flag stays unset
    auto other = chain_metric(space, WeightTransform::identity());
    auto mismatch = distortion_report(other, space, BParams{K});
    CHECK_FALSE(mismatch.snowflake_within_4.has_value());
}

TEST_CASE("f_upper_bound inverts the control function at the shifted level") {
    FParams params{expr::ScalarFn::parse("ln(t)"), std::log(3.0)};
    // ln(u) >= ln(2) + ln(3) first holds at u = 6
    auto u = f_upper_bound_auto(params, 2.0);
    CHECK(u >= 6.0 * (1.0 - 1e-12));
    CHECK(u <= 6.0 * (1.0 + 1e-6));

    // an explicit bracket that straddles the level works the same way
    auto v = f_upper_bound(params, 2.0, {2.0, 100.0});
    CHECK(v == doctest::Approx(6.0).epsilon(1e-6));
    CHECK(v >= 6.0 * (1.0 - 1e-12));

    // a bracket whose upper end stays below the level cannot certify
    CHECK_THROWS_AS(f_upper_bound(params, 2.0, {1.0, 2.0}), SearchError);

    // alpha = 0 with the level already reached at the lower end
    FParams plain{expr::ScalarFn::parse("ln(t)"), 0.0};
    CHECK(f_upper_bound(plain, 2.0, {2.0, 100.0}) == 2.0);
}

TEST_CASE("sandwich bound holds on spaces satisfying the chain condition") {
    // 1-D squared distances on 4 points satisfy (ln t, ln 3) by the
    // Cauchy-Schwarz bound (a+b+c)^2 <= 3(a^2+b^2+c^2)
    auto f = expr::ScalarFn::parse("ln(t)");
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto pts = oracles::random_points(seed, 4);
        std::vector<std::vector<double>> rows(4, std::vector<double>(4, 0.0));
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                rows[i][j] = (pts[i] - pts[j]) * (pts[i] - pts[j]);
            }
        }
        auto space = DistanceSpace::from_matrix(rows);
        REQUIRE(axioms::check_f_metric(space, FParams{f, std::log(3.0)}).pass);

        auto result = chain_metric(space, WeightTransform::identity());
        CHECK(exact_metric_check(result.metric).pass);
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = i + 1; j < 4; ++j) {
                const double d = result.metric(i, j);
                const double D = space.d(i, j);
                const double upper =
                    f_upper_bound_auto(FParams{f, std::log(3.0)}, d);
                CAPTURE(seed);
                CHECK(d <= D);
                CHECK(D <= upper * (1.0 + 1e-9));
                CHECK(upper <= 3.0 * d * (1.0 + 1e-6));  // exact inverse: e^{ln d + ln 3}
            }
        }
    }
}
