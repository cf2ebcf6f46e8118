#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "reeb3/circle_map.hpp"

using namespace reeb3;

namespace {
CircleMap sine_map(double amp, int n = 2048) {
    return CircleMap::from_lift([amp](double z) { return z + amp * std::sin(z); }, n);
}
} // namespace

TEST_CASE("lift_samples unwraps mod-2pi data", "[circle_map]") {
    const int n = 256;
    SECTION("identity map has degree 1") {
        std::vector<double> raw(n + 1);
        for (int j = 0; j <= n; ++j) raw[j] = std::fmod(kTwoPi * j / n, kTwoPi);
        auto m = lift_samples(raw);
        CHECK(degree(m) == 1);
    }
    SECTION("constant map has degree 0") {
        std::vector<double> raw(n + 1, 0.7);
        auto m = lift_samples(raw);
        CHECK(degree(m) == 0);
        CHECK(m(3.0) == Catch::Approx(0.7));
    }
    SECTION("wrapped sine profile unwraps to the closed-form lift") {
        const int big = 2048;
        std::vector<double> raw(big + 1);
        for (int j = 0; j <= big; ++j) {
            const double z = kTwoPi * j / big;
            raw[j] = std::fmod(z + 1.5 * std::sin(z) + kTwoPi, kTwoPi);
        }
        auto m = lift_samples(raw);
        CHECK(degree(m) == 1);
        CHECK(m.samples()[big] - m.samples()[0] == Catch::Approx(kTwoPi));
        // oracle: direct evaluation of the lift (up to the constant branch at 0)
        for (int j = 0; j <= big; j += 97) {
            const double z = kTwoPi * j / big;
            CHECK(m.samples()[j] == Catch::Approx(z + 1.5 * std::sin(z)).margin(1e-12));
        }
    }
    SECTION("degree hint mismatch is rejected") {
        std::vector<double> raw(n + 1);
        for (int j = 0; j <= n; ++j) raw[j] = std::fmod(kTwoPi * j / n, kTwoPi);
        CHECK_THROWS_MATCHES(lift_samples(raw, 2), Error, Catch::Matchers::Predicate<Error>(
            [](const Error& e) { return e.code() == ErrorCode::DegreeMismatch; }));
    }
    SECTION("ambiguous jumps are rejected") {
        std::vector<double> raw(n + 1, 0.0);
        for (int j = 0; j <= n; ++j) raw[j] = (j % 2) ? 2.5 : 0.0; // jumps of ~0.8 pi
        CHECK_THROWS_MATCHES(lift_samples(raw), Error, Catch::Matchers::Predicate<Error>(
            [](const Error& e) { return e.code() == ErrorCode::AmbiguousLift; }));
    }
}

TEST_CASE("degree of closed forms", "[circle_map]") {
    CHECK(degree(CircleMap::from_lift([](double z) { return z; }, 256)) == 1);
    CHECK(degree(CircleMap::from_lift([](double z) { return -2.0 * z + 0.4 * std::sin(3.0 * z); },
                                      2048)) == -2);
    CHECK(degree(CircleMap::from_lift([](double) { return 0.31; }, 256)) == 0);
}

TEST_CASE("evaluate_lift extends periodically with the degree", "[circle_map]") {
    auto ident = CircleMap::from_lift([](double z) { return z; }, 256);
    CHECK(evaluate_lift(ident, 7.0) == Catch::Approx(7.0).margin(1e-12));
    CHECK(evaluate_lift(ident, -3.5) == Catch::Approx(-3.5).margin(1e-12));

    auto m = sine_map(1.5);
    CHECK(evaluate_lift(m, 2.30052) == Catch::Approx(3.41856).margin(1e-4));

    // property: theta(t + 2*pi) - theta(t) == 2*pi*degree
    for (double t : {-5.0, -0.3, 0.0, 1.7, 3.9, 12.0}) {
        CHECK(evaluate_lift(m, t + kTwoPi) - evaluate_lift(m, t) ==
              Catch::Approx(kTwoPi).margin(1e-12));
    }
}

TEST_CASE("derivative is spectrally exact for band-limited lifts", "[circle_map]") {
    auto ident = CircleMap::from_lift([](double z) { return z; }, 256);
    for (double d : derivative(ident)) CHECK(d == Catch::Approx(1.0).margin(1e-12));

    auto m = sine_map(1.5);
    auto d = derivative(m);
    CHECK(d[0] == Catch::Approx(2.5).margin(1e-10));
    CHECK(d[m.grid_size() / 2] == Catch::Approx(-0.5).margin(1e-10));

    // sup-norm agreement with the analytic derivative
    double worst = 0.0;
    for (int j = 0; j < m.grid_size(); ++j)
        worst = std::max(worst, std::abs(d[j] - (1.0 + 1.5 * std::cos(m.node(j)))));
    CHECK(worst < 1e-10);
}

TEST_CASE("degree is invariant under constant shifts", "[circle_map]") {
    auto m = sine_map(2.5, 512);
    CHECK(degree(m.shifted(1.234)) == degree(m));
}

TEST_CASE("find_extrema locates alternating critical points", "[circle_map]") {
    SECTION("monotone map has none") {
        auto m = CircleMap::from_lift([](double z) { return z; }, 256);
        CHECK(find_extrema(m).empty());
    }
    SECTION("one dip: roots of 1 + 1.5 cos z") {
        auto m = sine_map(1.5);
        auto ext = find_extrema(m);
        REQUIRE(ext.count() == 1);
        CHECK(ext.a[0] == Catch::Approx(2.30052).margin(1e-4));
        CHECK(ext.b[0] == Catch::Approx(3.98267).margin(1e-4));
        CHECK(ext.theta_a[0] == Catch::Approx(3.41856).margin(1e-4));
        CHECK(ext.theta_b[0] == Catch::Approx(2.86463).margin(1e-4));
    }
    SECTION("one dip, larger amplitude: roots of 1 + 3.5 cos z") {
        auto m = sine_map(3.5);
        auto ext = find_extrema(m);
        REQUIRE(ext.count() == 1);
        CHECK(ext.a[0] == Catch::Approx(1.860548).margin(1e-4));
        CHECK(ext.b[0] == Catch::Approx(4.422637).margin(1e-4));
    }
    SECTION("two dips alternate and rotate to start at a maximum") {
        auto m = CircleMap::from_lift([](double z) { return z + 1.3 * std::sin(2.0 * z); }, 2048);
        auto ext = find_extrema(m);
        REQUIRE(ext.count() == 2);
        for (std::size_t k = 0; k < 2; ++k) {
            CHECK(ext.a[k] < ext.b[k]);
            CHECK(ext.theta_a[k] > ext.theta_b[k]);
            // maxima/minima consistent with the derivative sign change
            CHECK(m.derivative_at(ext.a[k] - 0.05) > 0.0);
            CHECK(m.derivative_at(ext.a[k] + 0.05) < 0.0);
        }
        CHECK(ext.a[0] < ext.b[0]);
        CHECK(ext.b[0] < ext.a[1]);
        CHECK(ext.b[1] < ext.a[0] + kTwoPi);
    }
    SECTION("tangential near-flat monotone map stays empty") {
        auto m = CircleMap::from_lift([](double z) { return z + 0.5 * std::sin(2.0 * z); }, 2048);
        CHECK(find_extrema(m).empty());
    }
}

TEST_CASE("degenerate plateaus trigger the perturbation policy", "[circle_map]") {
    // theta' proportional to (1 - cos z)^8: a band-limited monotone lift whose
    // derivative stays below 1e-9 over ~160 grid cells around z = 0.
    const int n = 2048;
    auto cum = cumulative_gauss5([](double z) { return std::pow(1.0 - std::cos(z), 8.0); }, 0.0,
                                 kTwoPi, n);
    std::vector<double> s(n + 1);
    for (int j = 0; j <= n; ++j) s[j] = kTwoPi * cum[j] / cum[n];
    CircleMap flat(std::move(s), 1e-9);

    CHECK_THROWS_MATCHES(find_extrema(flat, 1e-9), Error, Catch::Matchers::Predicate<Error>(
        [](const Error& e) { return e.code() == ErrorCode::DegenerateCritical; }));

    auto pe = find_extrema_with_perturbation(flat, 1e-9);
    CHECK(pe.extrema.perturbed);
    CHECK(pe.extrema.perturbation == Catch::Approx(1e-8));
    // the perturbed map is used downstream, and stays C0-close to the input
    double dev = 0.0;
    for (int j = 0; j <= n; ++j)
        dev = std::max(dev, std::abs(pe.theta.samples()[j] - flat.samples()[j]));
    CHECK(dev <= 1e-8 + 1e-15);
}

TEST_CASE("construction rejects undersized grids", "[circle_map]") {
    std::vector<double> s(33, 0.0);
    CHECK_THROWS_AS(CircleMap(std::move(s)), Error);
}
