#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "reeb3/forms_trig.hpp"

using namespace reeb3;

namespace {
// build a named closed-form one-form: alpha = sin z dx + cos x dy
TrigOneForm sample_alpha() {
    TrigOneForm a{TrigScalar(1), TrigScalar(1), TrigScalar(1)};
    a.f1.at(0, 0, 1) = cdouble(0.0, -0.5); // sin z
    a.f1.at(0, 0, -1) = cdouble(0.0, 0.5);
    a.f2.at(1, 0, 0) = cdouble(0.5, 0.0); // cos x
    a.f2.at(-1, 0, 0) = cdouble(0.5, 0.0);
    return a;
}
TrigOneForm sample_beta() {
    TrigOneForm b{TrigScalar(1), TrigScalar(1), TrigScalar(1)};
    b.f3.at(0, 1, 0) = cdouble(0.0, -0.5); // sin y
    b.f3.at(0, -1, 0) = cdouble(0.0, 0.5);
    return b;
}
} // namespace

TEST_CASE("trig scalars evaluate and differentiate exactly", "[forms_trig]") {
    TrigScalar s(2);
    s.at(1, 0, 0) = cdouble(0.5, 0.0);
    s.at(-1, 0, 0) = cdouble(0.5, 0.0); // cos x
    s.at(0, 2, 1) = cdouble(0.25, 0.1);
    s.symmetrize();

    const int g = 8;
    auto vals = s.eval_grid(g);
    auto dx = s.derivative(0).eval_grid(g);
    for (int ix = 0; ix < g; ++ix)
        for (int iy = 0; iy < g; ++iy)
            for (int iz = 0; iz < g; ++iz) {
                const double x = kTwoPi * ix / g, y = kTwoPi * iy / g, z = kTwoPi * iz / g;
                // symmetrize halves the one-sided (0,2,1) coefficient, so the
                // mode contributes 2*Re(0.5*(0.25 + 0.1i) e^{i(2y+z)})
                const double mode = 0.25 * std::cos(2 * y + z) - 0.1 * std::sin(2 * y + z);
                CHECK(vals[(std::size_t(ix) * g + iy) * g + iz] ==
                      Catch::Approx(std::cos(x) + mode).margin(1e-12));
                CHECK(dx[(std::size_t(ix) * g + iy) * g + iz] ==
                      Catch::Approx(-std::sin(x)).margin(1e-12));
            }
}

TEST_CASE("identity for one-forms holds pointwise and in the mean", "[forms_trig]") {
    SECTION("named closed forms") {
        auto res = check_identity_31(sample_alpha(), sample_beta());
        CHECK(res.pointwise < 1e-12);
        CHECK(res.integral < 1e-12);
        CHECK(res.exact_term_integral < 1e-12);
    }
    SECTION("alpha == beta collapses both sides") {
        auto a = sample_alpha();
        auto res = check_identity_31(a, a);
        CHECK(res.pointwise < 1e-13);
        CHECK(res.integral < 1e-13);
    }
    SECTION("random band-3 pairs") {
        std::mt19937_64 rng(42);
        double worst_point = 0.0, worst_int = 0.0, worst_exact = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            auto a = TrigOneForm::random(3, rng, 0.5);
            auto b = TrigOneForm::random(3, rng, 0.5);
            auto res = check_identity_31(a, b);
            worst_point = std::max(worst_point, res.pointwise);
            worst_int = std::max(worst_int, res.integral);
            worst_exact = std::max(worst_exact, res.exact_term_integral);
        }
        CHECK(worst_point < 1e-10);
        CHECK(worst_int < 1e-10);
        CHECK(worst_exact < 1e-10);
    }
}

TEST_CASE("d of d vanishes on coefficient tables", "[forms_trig]") {
    std::mt19937_64 rng(7);
    auto a = TrigOneForm::random(3, rng, 1.0);
    auto dd = exterior_derivative_density(exterior_derivative(a));
    // dd is a trig scalar; evaluate on a coarse grid
    auto vals = dd.eval_grid(8);
    for (double v : vals) CHECK(std::abs(v) < 1e-12);
}
