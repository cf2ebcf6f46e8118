#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "reeb3/solver.hpp"

using namespace reeb3;

namespace {
CircleMap sine_map(double amp, int n = 2048) {
    return CircleMap::from_lift([amp](double z) { return z + amp * std::sin(z); }, n);
}

PhiFunction wrap_phi(const CircleMap& map, double delta = kDefaultDelta) {
    return PhiFunction{map, delta, kDefaultEta, Bias::Neutral, 0.0};
}

// independent quadrature oracle: composite Gauss on the closed form
template <typename F>
double gauss_period(F&& f) {
    auto cum = cumulative_gauss5(f, 0.0, kTwoPi, 512);
    return cum.back();
}
} // namespace

TEST_CASE("functional_I on closed forms", "[solver]") {
    const int n = 2048;
    auto theta = CircleMap::from_lift([](double z) { return z; }, n);
    SECTION("phi == theta gives zero") {
        CHECK(functional_I(theta, wrap_phi(theta)) == 0.0);
    }
    SECTION("positive offset profile") {
        auto phi = CircleMap::from_lift(
            [](double z) { return z + 0.3 * (1.0 + std::sin(z)); }, n);
        const double I = functional_I(theta, wrap_phi(phi));
        const double oracle =
            gauss_period([](double t) { return std::tan(0.3 * (1.0 + std::sin(t))); });
        CHECK(I > 0.0);
        CHECK(I == Catch::Approx(oracle).margin(1e-10));
    }
    SECTION("odd-symmetric deviation integrates to zero") {
        auto phi = CircleMap::from_lift([](double z) { return z + 0.3 * std::sin(z); }, n);
        CHECK(std::abs(functional_I(theta, wrap_phi(phi))) < 1e-12);
    }
    SECTION("tube violation raises TanOverflow") {
        auto phi = CircleMap::from_lift([](double z) { return z + kPi / 2.0 * std::sin(z); }, n);
        CHECK_THROWS_MATCHES(functional_I(theta, wrap_phi(phi)), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == ErrorCode::TanOverflow;
                             }));
    }
}

TEST_CASE("find_balanced_phi bisects the bracket", "[solver]") {
    const int n = 512;
    auto theta = CircleMap::from_lift([](double z) { return z; }, n);
    SECTION("symmetric constant offsets balance at the midpoint") {
        auto lo = wrap_phi(theta.shifted(-0.2));
        auto hi = wrap_phi(theta.shifted(0.2));
        auto star = find_balanced_phi(theta, lo, hi);
        CHECK(std::abs(functional_I(theta, star)) < 1e-10);
        for (int j = 0; j <= n; ++j)
            CHECK(star.map.samples()[j] == Catch::Approx(theta.samples()[j]).margin(1e-9));
    }
    SECTION("reversed bracket is rejected") {
        auto lo = wrap_phi(theta.shifted(-0.2));
        auto hi = wrap_phi(theta.shifted(0.2));
        CHECK_THROWS_MATCHES(find_balanced_phi(theta, hi, lo), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == ErrorCode::BadBracket;
                             }));
    }
}

TEST_CASE("integrate_log_f solves the rescaling equation", "[solver]") {
    const int n = 2048;
    auto theta = CircleMap::from_lift([](double z) { return z; }, n);
    SECTION("phi == theta gives f == 1") {
        auto [f, resid] = integrate_log_f(theta, wrap_phi(theta));
        CHECK(resid == 0.0);
        for (double v : f) CHECK(v == 1.0);
    }
    SECTION("non-balanced phi leaves the documented periodicity defect") {
        auto phi = CircleMap::from_lift(
            [](double z) { return z + 0.3 * (1.0 + std::sin(z)); }, n);
        auto [f, resid] = integrate_log_f(theta, wrap_phi(phi));
        const double I = functional_I(theta, wrap_phi(phi));
        CHECK(f.back() == Catch::Approx(std::exp(-I)).margin(1e-14));
        CHECK(resid == Catch::Approx(1.0 - std::exp(-I)).margin(1e-14));
        CHECK(resid > 0.0);
        // pointwise against the closed-form solution
        for (int j = 0; j < n; j += 111) {
            const double z = theta.node(j);
            const double exact = std::exp(
                -cumulative_gauss5([](double t) { return std::tan(0.3 * (1.0 + std::sin(t))); },
                                   0.0, z == 0.0 ? 1e-300 : z, 200)
                     .back());
            CHECK(f[j] == Catch::Approx(exact).margin(1e-10));
        }
    }
    SECTION("ode residual is small on fine grids and bounded on coarse ones") {
        auto phi_fn = [](double z) { return z + 0.3 * std::sin(z); };
        auto phi_fine = CircleMap::from_lift(phi_fn, n);
        auto [f_fine, r_fine] = integrate_log_f(theta, wrap_phi(phi_fine));
        (void)r_fine;
        CHECK(verify_ode_residual(theta, wrap_phi(phi_fine), f_fine) < 1e-8);

        auto theta_coarse = CircleMap::from_lift([](double z) { return z; }, 64);
        auto phi_coarse = CircleMap::from_lift(phi_fn, 64);
        auto [f_coarse, r_coarse] = integrate_log_f(theta_coarse, wrap_phi(phi_coarse));
        (void)r_coarse;
        CHECK(verify_ode_residual(theta_coarse, wrap_phi(phi_coarse), f_coarse) < 1e-4);
    }
}

TEST_CASE("synthesize_certificate end to end", "[solver]") {
    SECTION("monotone input: trivial certificate") {
        auto theta = CircleMap::from_lift([](double z) { return z; }, 2048);
        auto cert = synthesize_certificate(theta);
        CHECK(cert.winding == 1);
        CHECK(cert.n_value == Catch::Approx(kTwoPi));
        CHECK(cert.residuals.I_residual < 1e-10);
        CHECK(cert.residuals.f_periodicity < 1e-9);
        CHECK(cert.residuals.reeb_alpha < 1e-10);
        CHECK(cert.residuals.reeb_contraction < 1e-10);
        CHECK(cert.residuals.min_contact_density > 0.0);
        for (double v : cert.f) CHECK(v > 0.0);
        for (double v : cert.g) CHECK(v > 0.0);
    }
    SECTION("single-dip accepted input") {
        auto theta = sine_map(1.5);
        auto cert = synthesize_certificate(theta);
        CHECK(cert.winding == 1);
        CHECK(cert.residuals.I_residual < 1e-10);
        CHECK(cert.residuals.f_periodicity < 1e-9);
        CHECK(cert.residuals.reeb_alpha < 1e-8);
        CHECK(cert.residuals.reeb_contraction < 1e-7);
        CHECK(cert.residuals.min_contact_density > 0.0);
        CHECK(cert.residuals.min_slope >= kDefaultEta / 2.0);
        CHECK(cert.residuals.tube_margin >= cert.phi.delta / 2.0);
        CHECK(cert.residuals.gray_min_density > 0.0);
        // g = f cos(phi - theta) at every node
        for (int j = 0; j <= cert.theta.grid_size(); ++j) {
            const double dev = cert.phi.map.samples()[j] - cert.theta.samples()[j];
            CHECK(cert.g[j] == Catch::Approx(cert.f[j] * std::cos(dev)).margin(1e-14));
        }
        // consistency: exp(-I) == f(2*pi)/f(0)
        const double I = functional_I(cert.theta, cert.phi);
        CHECK(std::exp(-I) == Catch::Approx(cert.f.back() / cert.f.front()).margin(1e-10));
    }
    SECTION("negative degree input") {
        auto theta = CircleMap::from_lift(
            [](double z) { return -z - 1.2 * std::sin(z); }, 2048);
        auto cert = synthesize_certificate(theta);
        CHECK(cert.winding == -1);
        CHECK(cert.residuals.I_residual < 1e-10);
        CHECK(cert.residuals.reeb_alpha < 1e-8);
        CHECK(cert.residuals.reeb_contraction < 1e-7);
        CHECK(cert.residuals.min_contact_density > 0.0);
    }
    SECTION("rejected input raises CriterionFailed") {
        CHECK_THROWS_MATCHES(synthesize_certificate(sine_map(3.5)), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == ErrorCode::CriterionFailed;
                             }));
    }
}
