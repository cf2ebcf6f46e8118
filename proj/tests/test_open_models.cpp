#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "reeb3/open_models.hpp"

using namespace reeb3;

TEST_CASE("default open profile meets its anchors", "[open_models]") {
    auto spec = default_open_theta();
    CHECK(std::abs(spec.theta(0.0)) < 1e-12);
    CHECK(std::abs(spec.theta(kPi) + kPi) < 1e-12);
    // 2*pi-periodic as a circle value (degree zero profile)
    for (double z : {0.3, 2.0, 4.4, 6.0}) {
        CHECK(spec.theta(z + kTwoPi) == Catch::Approx(spec.theta(z)).margin(1e-12));
    }
    // derivative consistency with a central difference
    for (double z : {0.05, 1.0, kPi - 0.05, kPi + 0.05, 5.0}) {
        const double fd = (spec.theta(z + 1e-6) - spec.theta(z - 1e-6)) / 2e-6;
        CHECK(spec.dtheta(z) == Catch::Approx(fd).margin(1e-7));
    }
    // the straight branches are exactly +-1 sloped
    CHECK(spec.dtheta(1.5) == -1.0);
    CHECK(spec.dtheta(4.0) == 1.0);
}

TEST_CASE("cumulative F on the exact branch", "[open_models]") {
    // on [0.1, pi - 0.1] the profile is exactly -z, so F(z) = sin(z) - 1 and
    // in particular F(pi) is close to the branch value -1
    auto spec = default_open_theta();
    auto rep = build_example_i(spec, 0.1);
    const int j_pi = int(std::lround((kPi - spec.z_min) / (spec.z_max - spec.z_min) * spec.grid));
    CHECK(rep.z[j_pi] == Catch::Approx(kPi).margin(1e-9));
    CHECK(rep.F[j_pi] == Catch::Approx(-1.0).margin(5e-3)); // blend windows shift it slightly
    const int j_half = int(std::lround((kPi / 2.0 - spec.z_min) / (spec.z_max - spec.z_min) *
                                       spec.grid));
    CHECK(rep.F[j_half] == Catch::Approx(std::sin(rep.z[j_half]) - 1.0).margin(1e-4));
}

TEST_CASE("constructive example verifies the contact conditions", "[open_models]") {
    auto spec = default_open_theta();
    const double eps = 0.1;
    auto rep = build_example_i(spec, eps);

    SECTION("alpha(X) stays above the eps floor") {
        CHECK(rep.min_alpha_X >= eps - 1e-8);
    }
    SECTION("the contraction vanishes to rounding") {
        CHECK(rep.contraction_residual < 1e-10);
    }
    SECTION("nondegeneracy factor is positive and matches the slope range") {
        CHECK(rep.min_nondegeneracy > 0.0);
        CHECK(rep.min_nondegeneracy < 1.0); // theta' dips below -1 in the blends
    }
    SECTION("d(alpha) is proportional to d(beta) with the stated factor") {
        CHECK(rep.proportionality_residual < 1e-12);
    }
    SECTION("oversized eps is rejected") {
        // theta' reaches about -1.35 inside the blend window, so eps >= 0.37 dies
        CHECK_THROWS_MATCHES(build_example_i(spec, 0.45), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == ErrorCode::EpsilonTooLarge;
                             }));
    }
    SECTION("anchor violations are rejected") {
        auto bad = spec;
        bad.theta = [](double z) { return -z + 0.01; };
        bad.dtheta = [](double) { return -1.0; };
        CHECK_THROWS_MATCHES(build_example_i(bad, eps), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == ErrorCode::AnchorViolation;
                             }));
    }
}

TEST_CASE("transversality counterexample report", "[open_models]") {
    auto rep = check_example_ii();
    CHECK(rep.min_inner_product > 0.70711);
    CHECK(rep.min_inner_product > rep.certified_lower_bound);
    CHECK(rep.min_phi_prime > 0.0);
    CHECK(rep.phi_prime_at_zero == Catch::Approx(0.5));
    CHECK(rep.transversality_pairing == 1.0);
}
