#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "reeb3/fft.hpp"
#include "reeb3/spectral.hpp"

using namespace reeb3;

namespace {

// O(n^2) reference DFT, the oracle for the fast transform.
std::vector<cdouble> naive_dft(const std::vector<cdouble>& x) {
    const std::size_t n = x.size();
    std::vector<cdouble> out(n, cdouble(0.0));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * kPi * double(j) * double(k) / double(n);
            out[k] += x[j] * cdouble(std::cos(ang), std::sin(ang));
        }
    return out;
}

double rand_unit(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; }

} // namespace

TEST_CASE("fft matches the naive DFT", "[fft]") {
    std::mt19937_64 rng(7);
    for (std::size_t n : {64u, 128u, 96u, 100u, 171u, 2052u}) {
        std::vector<cdouble> x(n);
        for (auto& v : x) v = cdouble(rand_unit(rng), rand_unit(rng));
        auto ref = naive_dft(x);
        auto fast = x;
        fft(fast);
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(fast[k] - ref[k]));
        INFO("n = " << n);
        CHECK(worst < 1e-9 * double(n));

        ifft(fast);
        double round = 0.0;
        for (std::size_t k = 0; k < n; ++k) round = std::max(round, std::abs(fast[k] - x[k]));
        CHECK(round < 1e-11);
    }
}

TEST_CASE("spectral derivative is exact for band-limited data", "[spectral]") {
    const int n = 256;
    std::vector<double> v(n), expect(n);
    for (int j = 0; j < n; ++j) {
        const double z = kTwoPi * j / n;
        v[j] = 0.7 + std::sin(3.0 * z) - 0.25 * std::cos(11.0 * z + 0.3);
        expect[j] = 3.0 * std::cos(3.0 * z) + 0.25 * 11.0 * std::sin(11.0 * z + 0.3);
    }
    Spectrum s(v);
    auto d = s.derivative_nodes();
    for (int j = 0; j < n; ++j) CHECK(d[j] == Catch::Approx(expect[j]).margin(1e-10));

    // off-grid interpolation of value and derivative
    CHECK(s.value_at(1.234567) ==
          Catch::Approx(0.7 + std::sin(3 * 1.234567) - 0.25 * std::cos(11 * 1.234567 + 0.3))
              .margin(1e-10));
    CHECK(s.derivative_at(1.234567) ==
          Catch::Approx(3 * std::cos(3 * 1.234567) + 2.75 * std::sin(11 * 1.234567 + 0.3))
              .margin(1e-10));
}

TEST_CASE("spectral antiderivative inverts the derivative and matches the trapezoid mean",
          "[spectral]") {
    const int n = 200; // non power of two on purpose
    std::vector<double> v(n);
    for (int j = 0; j < n; ++j) {
        const double z = kTwoPi * j / n;
        v[j] = 1.5 + std::cos(2.0 * z) + 0.3 * std::sin(5.0 * z);
    }
    Spectrum s(v);
    auto T = s.antiderivative_nodes();
    CHECK(T[0] == 0.0);
    // T(z) = 1.5 z + sin(2z)/2 - 0.06 cos(5z) + 0.06
    for (int j = 0; j < n; ++j) {
        const double z = kTwoPi * j / n;
        const double expect = 1.5 * z + 0.5 * std::sin(2.0 * z) - 0.06 * std::cos(5.0 * z) + 0.06;
        CHECK(T[j] == Catch::Approx(expect).margin(1e-10));
    }
    CHECK(s.mean() * kTwoPi == Catch::Approx(trapezoid_period(v)).margin(1e-12));
}

TEST_CASE("jackson kernel is positive, normalized and band-limited", "[spectral]") {
    const std::size_t n = 512, order = n / 4;
    auto w = jackson_kernel(n, order);
    double total = 0.0;
    for (double x : w) {
        CHECK(x >= 0.0);
        total += x;
    }
    CHECK(total == Catch::Approx(1.0).margin(1e-12));

    auto wf = fft_real(w);
    // coefficients vanish beyond degree 2*order-2
    for (std::size_t k = 2 * order; k <= n / 2; ++k) {
        CHECK(std::abs(wf[k]) < 1e-12);
    }
}

TEST_CASE("gauss quadrature reproduces smooth antiderivatives", "[spectral]") {
    auto F = cumulative_gauss5([](double t) { return std::cos(t); }, 0.0, 4.0, 200);
    for (std::size_t j = 0; j <= 200; ++j) {
        const double x = 4.0 * double(j) / 200.0;
        CHECK(F[j] == Catch::Approx(std::sin(x)).margin(1e-14));
    }
}

TEST_CASE("pchip slopes preserve monotone data", "[spectral]") {
    const int n = 64;
    std::vector<double> v(n + 1);
    for (int j = 0; j <= n; ++j) {
        const double z = kTwoPi * j / n;
        v[j] = z + 0.8 * std::sin(z);
    }
    auto sl = pchip_slopes_periodic(v);
    REQUIRE(sl.size() == std::size_t(n + 1));
    for (double m : sl) CHECK(m >= 0.0);
}
