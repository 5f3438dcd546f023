#include <cmath>

#include "doctest.h"
#include "metrikos/axioms.hpp"
#include "metrikos/regularity.hpp"
#include "oracles.hpp"

using namespace metrikos;
using namespace metrikos::regularity;
using core::BParams;
using core::DistanceSpace;
using core::FParams;
using core::SampledSequence;
using core::ThetaParams;

namespace {

DistanceSpace squared_line() {
    return DistanceSpace::from_matrix({{0, 1, 4}, {1, 0, 1}, {4, 1, 0}});
}

DistanceSpace unit_line() {
    return DistanceSpace::from_matrix({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
}

FParams ln_with(double alpha) {
    return FParams{expr::ScalarFn::parse("ln(t)"), alpha};
}

}  // namespace

TEST_CASE("monotone_search brackets the predicate boundary from below") {
    const double target = 3.141592653589793;
    auto found = monotone_search({}, [&](double t) { return t <= target; });
    CHECK(found <= target);                       // verified-true lower end
    CHECK(found >= target * (1.0 - 0x1p-19));     // within the relative resolution

    // a predicate that never fails returns the sweep's upper end
    CHECK(monotone_search({}, [](double) { return true; }) == 0x1p10);
    // a predicate failing at the lower end is not certifiable
    CHECK_THROWS_AS(monotone_search({}, [](double) { return false; }), SearchError);

    // custom schedule narrows the bracket accordingly
    SearchSchedule fine{0.5, 8.0, 0x1p-30};
    auto precise = monotone_search(fine, [&](double t) { return t <= 2.0; });
    CHECK(precise <= 2.0);
    CHECK(precise >= 2.0 * (1.0 - 0x1p-28));
}

TEST_CASE("r_for_b is the exact quotient t/K") {
    auto cert = r_for_b(BParams{2.0}, 4.0);
    CHECK(cert.condition == "iii-C");
    CHECK(cert.method == "paper-formula");
    CHECK(cert.scale == 4.0);
    CHECK(cert.value == 2.0);
    CHECK(cert.extras.at("K") == 2.0);
    CHECK(r_for_b(BParams{3.0}, 1.0).value == 1.0 / 3.0);
}

TEST_CASE("phi_from_f certifies eps/6 for (ln t, ln 3)") {
    auto cert = phi_from_f(ln_with(std::log(3.0)), 1.0);
    CHECK(cert.condition == "uniform");
    CHECK(cert.method == "paper-formula");
    CHECK(cert.scale == 1.0);
    // closed form: delta = eps/3 approached from below, phi = delta/2
    CHECK(cert.value == doctest::Approx(1.0 / 6.0).epsilon(1e-6));
    CHECK(cert.value <= 1.0 / 6.0);
    CHECK(cert.value == cert.extras.at("delta") / 2.0);
    CHECK(cert.margin >= 0.0);
    CHECK(cert.resolution == 0x1p-20);
    // the certified delta satisfies the defining inequality with room to spare
    CHECK(std::log(cert.extras.at("delta")) < std::log(1.0) - std::log(3.0));

    // phi scales linearly with eps for this control pair
    auto doubled = phi_from_f(ln_with(std::log(3.0)), 2.0);
    CHECK(doubled.value == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    auto halved = phi_from_f(ln_with(std::log(3.0)), 0.5);
    CHECK(halved.value == doctest::Approx(1.0 / 12.0).epsilon(1e-6));

    // alpha = 0 collapses to delta = eps
    auto plain = phi_from_f(ln_with(0.0), 1.0);
    CHECK(plain.extras.at("delta") == doctest::Approx(1.0).epsilon(1e-6));

    // an eps below the sweep's lower end is not certifiable
    CHECK_THROWS_AS(phi_from_f(ln_with(std::log(3.0)), 0x1p-25), SearchError);
}

TEST_CASE("r_from_f equals twice the uniform phi for the same scale") {
    auto phi = phi_from_f(ln_with(std::log(3.0)), 1.0);
    auto r = r_from_f(ln_with(std::log(3.0)), 1.0);
    CHECK(r.condition == "iii-C");
    CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    // same monotone search, same delta: the quotient relation is exact
    CHECK(r.value == 2.0 * phi.value);
}

TEST_CASE("delta_theta_at_origin for the two reference actions") {
    auto add = delta_theta_at_origin(ThetaParams{expr::BinaryFn::parse("s+t")}, 1.0);
    CHECK(add.condition == "iii-C");
    CHECK(add.extras.at("delta") == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(add.extras.at("delta") <= 0.5);
    CHECK(add.value == add.extras.at("delta") / std::sqrt(2.0));

    auto mul = delta_theta_at_origin(ThetaParams{expr::BinaryFn::parse("s+t+s*t")}, 1.0);
    // closed form: 2*delta + delta^2 = 1 at delta = sqrt(2) - 1
    CHECK(std::fabs(mul.extras.at("delta") - (std::sqrt(2.0) - 1.0)) <= 1e-6);
    CHECK(mul.value == mul.extras.at("delta") / std::sqrt(2.0));

    // larger scale admits a larger delta
    auto wide = delta_theta_at_origin(ThetaParams{expr::BinaryFn::parse("s+t")}, 2.0);
    CHECK(wide.extras.at("delta") > add.extras.at("delta"));
}

TEST_CASE("locally_regular_phi scans the space's candidate scales") {
    auto cert = locally_regular_phi(unit_line(), "p0", 1.0);
    REQUIRE(cert.has_value());
    CHECK(cert->condition == "iii-A");
    CHECK(cert->anchor == "p0");
    CHECK(cert->method == "grid-search");
    CHECK(cert->value == 1.0);
    CHECK(cert->resolution == 0.0);

    // eps past the diameter admits the largest candidate
    auto wide = locally_regular_phi(unit_line(), "p0", 2.5);
    REQUIRE(wide.has_value());
    CHECK(wide->value == 2.0);

    CHECK_THROWS_AS(locally_regular_phi(unit_line(), "zzz", 1.0), InputError);
}

TEST_CASE("uniform_phi equals the minimum of the per-anchor values") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        auto space = oracles::random_space(seed, 6);
        for (double eps : {0.5, 1.0, 2.0, 4.0}) {
            auto uni = uniform_phi(space, eps);
            REQUIRE(uni.has_value());
            double min_local = std::numeric_limits<double>::infinity();
            for (const auto& label : space.labels()) {
                auto local = locally_regular_phi(space, label, eps);
                REQUIRE(local.has_value());
                min_local = std::min(min_local, local->value);
            }
            CAPTURE(seed);
            CAPTURE(eps);
            CHECK(uni->value == min_local);
        }
    }
}

TEST_CASE("uniform_phi is non-decreasing in eps and replays cleanly") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto space = oracles::random_space(seed, 6);
        double prev = 0.0;
        for (double eps : {0.5, 1.0, 2.0, 4.0}) {
            auto cert = uniform_phi(space, eps);
            REQUIRE(cert.has_value());
            CHECK(cert->value >= prev);
            prev = cert->value;
            // the certificate's own claim must replay without a witness
            auto replay = replay_uniform_phi(space, cert->value, eps, Tolerance{kReplayRelTol});
            CAPTURE(seed);
            CAPTURE(eps);
            CHECK(replay.pass);
        }
    }
}

TEST_CASE("replay_uniform_phi agrees with the brute-force scan") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        auto space = oracles::random_space(seed, 6);
        for (double phi : {0.3, 0.9, 1.7, 5.0}) {
            for (double eps : {1.0, 2.0}) {
                auto verdict = replay_uniform_phi(space, phi, eps);
                CAPTURE(seed);
                CAPTURE(phi);
                CAPTURE(eps);
                CHECK(verdict.pass == oracles::brute_uniform_phi_holds(space, phi, eps));
                if (!verdict.pass) {
                    CHECK(verdict.witness->kind == "uniform-phi");
                    CHECK(verdict.witness->points.size() == 3);
                }
            }
        }
    }
    // below the smallest distance only identical triples fire
    auto sparse = replay_uniform_phi(unit_line(), 0.5, 1.0);
    CHECK(sparse.pass);
    CHECK(sparse.certificates.at("triples") == 3.0);
    CHECK(sparse.certificates.at("min_margin") == 1.0);
    CHECK_THROWS_AS(replay_uniform_phi(unit_line(), -1.0, 1.0), InputError);
}

TEST_CASE("verify_iiiC replays r = t/K on the squared line") {
    auto space = squared_line();
    auto cert = r_for_b(BParams{2.0}, 4.0);
    for (const auto& anchor : space.labels()) {
        auto verdict = verify_iiiC(space, anchor, 4.0, cert.value, Tolerance{kReplayRelTol});
        CAPTURE(anchor);
        CHECK(verdict.pass);
    }
    // an absurd r produces a concrete (b, c) witness
    auto fail = verify_iiiC(space, "p0", 4.0, 10.0);
    REQUIRE_FALSE(fail.pass);
    CHECK(fail.witness->kind == "iii-C");
    CHECK(fail.witness->points.size() == 2);
    CHECK(fail.witness->rhs == 10.0);

    // no point at distance >= k: vacuous pass
    auto vac = verify_iiiC(space, "p0", 100.0, 1.0);
    CHECK(vac.pass);
    CHECK(vac.certificates.at("vacuous") == 1.0);

    CHECK_THROWS_AS(verify_iiiC(space, "p0", -1.0, 1.0), InputError);
}

TEST_CASE("verify_iiiC agrees with the brute-force scan") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        auto space = oracles::random_space(seed, 6);
        const double K = axioms::min_b_constant(space);
        for (double t : {0.5, 2.0, 6.0}) {
            const double r = t / K;
            for (const auto& anchor : space.labels()) {
                auto verdict = verify_iiiC(space, anchor, t, r);
                CAPTURE(seed);
                CAPTURE(t);
                CAPTURE(anchor);
                CHECK(verdict.pass ==
                      oracles::brute_iiiC_holds(space, space.index_of(anchor), t, r));
                CHECK(verdict.pass);  // theorem: r = t/K always replays
            }
        }
    }
}

TEST_CASE("check_iiiB on distance traces") {
    SampledSequence aa{"d(a_n,a)", {1.0, 0.5, 0.2, 0.05, 0.01}};
    SampledSequence ab{"d(a_n,b_n)", {1.0, 0.6, 0.3, 0.04, 0.02}};
    SampledSequence ok_ba{"d(b_n,a)", {2.0, 1.0, 0.5, 0.15, 0.03}};
    CHECK(check_iiiB(aa, ab, ok_ba, 0.1).pass);

    SampledSequence stuck{"d(b_n,a)", {0.5, 0.5, 0.5, 0.5, 0.5}};
    auto fail = check_iiiB(aa, ab, stuck, 0.1);
    REQUIRE_FALSE(fail.pass);
    CHECK(fail.witness->kind == "iii-B");

    // premises never fire: vacuous pass
    SampledSequence never{"d(a_n,a)", {1.0, 1.0, 1.0, 1.0, 1.0}};
    auto vac = check_iiiB(never, ab, ok_ba, 0.1);
    CHECK(vac.pass);
    CHECK(vac.certificates.at("vacuous") == 1.0);
    // mismatched trace lengths are rejected
    SampledSequence stub{"d(a_n,a)", {1.0}};
    CHECK_THROWS_AS(check_iiiB(stub, ab, ok_ba, 0.1), InputError);

    // a looser conclusion threshold can rescue the verdict
    SampledSequence close{"d(b_n,a)", {1.0, 1.0, 1.0, 0.15, 0.15}};
    CHECK_FALSE(check_iiiB(aa, ab, close, 0.1).pass);
    CHECK(check_iiiB(aa, ab, close, 0.1, 0.2).pass);
}

TEST_CASE("cross_check_conditions agrees on finite spaces") {
    const std::vector<double> grid{0.5, 1.0, 2.0, 4.0};
    CHECK(cross_check_conditions(unit_line(), grid).pass);
    CHECK(cross_check_conditions(squared_line(), grid).pass);
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto space = oracles::random_space(seed, 6);
        CAPTURE(seed);
        CHECK(cross_check_conditions(space, grid).pass);
    }
}
