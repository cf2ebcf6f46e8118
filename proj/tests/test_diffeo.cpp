#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "reeb3/diffeo.hpp"

using namespace reeb3;

TEST_CASE("std_map evaluates the model diffeomorphism", "[diffeo]") {
    SECTION("origin is fixed") {
        auto q = std_map(1.0, {0.0, 0.0, 0.0});
        CHECK(q.x == 0.0);
        CHECK(q.y == 0.0);
        CHECK(q.z == 0.0);
    }
    SECTION("unit x at n = 1") {
        auto q = std_map(1.0, {1.0, 0.0, 0.0});
        CHECK(q.x == Catch::Approx(-1.0));
        CHECK(q.y == Catch::Approx(0.0).margin(1e-15));
        CHECK(q.z == 0.0);
    }
    SECTION("generic point at n = 2 matches direct arithmetic") {
        const PointR3 p{0.3, 1.1, -0.4};
        auto q = std_map(2.0, p);
        CHECK(q.x == Catch::Approx(-0.4 * std::sin(2.2) - 0.3 * std::cos(2.2) / 2.0));
        CHECK(q.y == Catch::Approx(-0.4 * std::cos(2.2) + 0.3 * std::sin(2.2) / 2.0));
        CHECK(q.z == Catch::Approx(1.1));
    }
    SECTION("zero frequency is rejected") {
        CHECK_THROWS_MATCHES(std_map(0.0, {1.0, 1.0, 1.0}), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == ErrorCode::ZeroFrequency;
                             }));
    }
}

TEST_CASE("standard pullback identity is exact algebra", "[diffeo]") {
    for (double n : {1.0, 2.0, -1.0, -2.0, kTwoPi}) {
        INFO("n = " << n);
        CHECK(std_pullback_residual(n, 1000) < 1e-12);
    }
    CHECK_THROWS_AS(std_pullback_residual(0.0, 10), Error);
}

TEST_CASE("phi_inverse inverts monotone lifts", "[diffeo]") {
    SECTION("identity") {
        auto phi = PhiFunction{CircleMap::from_lift([](double z) { return z; }, 256),
                               kDefaultDelta, kDefaultEta, Bias::Neutral, 0.0};
        CHECK(phi_inverse(phi, 2.5) == Catch::Approx(2.5).margin(1e-10));
    }
    SECTION("round trip through a monotone profile") {
        auto map = CircleMap::from_lift(
            [](double z) { return z + 0.3 * (1.0 + std::sin(z)); }, 1024);
        PhiFunction phi{map, kDefaultDelta, kDefaultEta, Bias::Neutral, 0.0};
        const double y = map(1.0);
        CHECK(phi_inverse(phi, y) == Catch::Approx(1.0).margin(1e-9));
        // equivariance of the inverse: shifting y by 2*pi*deg shifts t by 2*pi
        CHECK(phi_inverse(phi, y + kTwoPi) == Catch::Approx(1.0 + kTwoPi).margin(1e-9));
    }
    SECTION("negative degree") {
        auto map = CircleMap::from_lift([](double z) { return -z; }, 256);
        PhiFunction phi{map, kDefaultDelta, kDefaultEta, Bias::Neutral, 0.0};
        CHECK(phi_inverse(phi, -1.25) == Catch::Approx(1.25).margin(1e-9));
    }
}

TEST_CASE("straightening residual shrinks with the certificate quality", "[diffeo]") {
    SECTION("identity certificate is exact to the inversion tolerance") {
        auto theta = CircleMap::from_lift([](double z) { return z; }, 512);
        auto cert = synthesize_certificate(theta);
        CHECK(straightening_residual(cert, 500) < 1e-9);
    }
    SECTION("single-dip certificate stays below the interpolation budget") {
        auto theta = CircleMap::from_lift([](double z) { return z + 1.5 * std::sin(z); }, 2048);
        auto cert = synthesize_certificate(theta);
        CHECK(straightening_residual(cert, 1000) < 1e-6);
    }
    SECTION("winding-two certificate") {
        auto theta = CircleMap::from_lift(
            [](double z) { return 2.0 * z + 0.4 * std::sin(3.0 * z); }, 2048);
        auto cert = synthesize_certificate(theta);
        CHECK(cert.winding == 2);
        CHECK(straightening_residual(cert, 1000) < 1e-6);
    }
    SECTION("residual non-increasing under refinement (factor-2 slack)") {
        double prev = -1.0;
        for (int n : {512, 2048, 8192}) {
            auto theta =
                CircleMap::from_lift([](double z) { return z + 1.5 * std::sin(z); }, n);
            auto cert = synthesize_certificate(theta);
            const double r = straightening_residual(cert, 400);
            if (prev >= 0.0) CHECK(r <= 2.0 * prev);
            prev = r;
        }
    }
}
