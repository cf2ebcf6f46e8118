#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "reeb3/circle_map.hpp"
#include "reeb3/errors.hpp"
#include "reeb3/solver.hpp"

namespace reeb3 {

struct PointR3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

/// The model diffeomorphism pulling sin(n z) dx + cos(n z) dy back to
/// dz + x dy:
///   (x, y, z) -> (z sin(ny) - x cos(ny)/n, z cos(ny) + x sin(ny)/n, y).
inline PointR3 std_map(double n, const PointR3& p) {
    require(n != 0.0, ErrorCode::ZeroFrequency, "frequency n must be nonzero");
    const double s = std::sin(n * p.y), c = std::cos(n * p.y);
    return {p.z * s - p.x * c / n, p.z * c + p.x * s / n, p.y};
}

/// Uniform double in [-1, 1) from a seeded engine; fixed bit mapping so the
/// stream is identical across platforms.
inline double unit_symmetric(std::mt19937_64& rng) {
    return 2.0 * (double(rng() >> 11) * 0x1.0p-53) - 1.0;
}

/// Max over random points of |(DPsi)^T alpha_n(Psi(p)) - alpha_st(p)| with the
/// Jacobian evaluated analytically. The identity is exact algebra, so the
/// residual is pure rounding.
inline double std_pullback_residual(double n, int sample_count, std::uint64_t seed = 0) {
    require(n != 0.0, ErrorCode::ZeroFrequency, "frequency n must be nonzero");
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int i = 0; i < sample_count; ++i) {
        PointR3 p{4.0 * unit_symmetric(rng), 4.0 * unit_symmetric(rng),
                  4.0 * unit_symmetric(rng)};
        const PointR3 q = std_map(n, p);
        const double s = std::sin(n * p.y), c = std::cos(n * p.y);
        // d(u) = s dz + (n z c + x s) dy - (c/n) dx
        // d(v) = c dz + (-n z s + x c) dy + (s/n) dx
        const double du_x = -c / n, du_y = n * p.z * c + p.x * s, du_z = s;
        const double dv_x = s / n, dv_y = -n * p.z * s + p.x * c, dv_z = c;
        const double an_u = std::sin(n * q.z), an_v = std::cos(n * q.z); // alpha_n at image
        const double pull_x = an_u * du_x + an_v * dv_x;
        const double pull_y = an_u * du_y + an_v * dv_y;
        const double pull_z = an_u * du_z + an_v * dv_z;
        worst = std::max({worst, std::abs(pull_x - 0.0), std::abs(pull_y - p.x),
                          std::abs(pull_z - 1.0)});
    }
    return worst;
}

/// Invert the strictly monotone lift: the t with phi(t) = y, via bisection on
/// the extended lift, |phi(t) - y| < 1e-10.
inline double phi_inverse(const PhiFunction& phi, double y) {
    const CircleMap& m = phi.map;
    const int deg = m.degree();
    require(deg != 0, ErrorCode::InvalidInput, "monotone inversion needs nonzero degree");
    const double dir = deg > 0 ? 1.0 : -1.0;
    // bracket via the degree-linear growth of the lift
    const double y0 = m(0.0);
    double lo = (y - y0) / (kTwoPi * deg) * kTwoPi - kTwoPi;
    double hi = lo + 4.0 * kTwoPi;
    while (dir * (m(lo) - y) > 0.0) lo -= kTwoPi;
    while (dir * (m(hi) - y) < 0.0) hi += kTwoPi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = m(mid);
        if (std::abs(v - y) < 1e-10 && hi - lo < 1e-9) return mid;
        if (dir * (v - y) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Residual of the straightening identity: Psi(x, y, z) = (x, y, h(z)) with
/// h = phi^{-1}(w z) pulls alpha_phi back to alpha_w = sin(wz)dx + cos(wz)dy.
/// The pullback evaluates the certificate form spectrally and h through the
/// interpolated inverse, so the residual reflects the interpolation error and
/// shrinks under grid refinement.
inline double straightening_residual(const ReebCertificate& cert, int sample_count,
                                     std::uint64_t seed = 0) {
    const int w = cert.winding;
    require(w != 0, ErrorCode::InvalidInput, "certificate with zero winding");
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int i = 0; i < sample_count; ++i) {
        const double z = kPi * (unit_symmetric(rng) + 1.0); // [0, 2*pi)
        const double h = phi_inverse(cert.phi, double(w) * z);
        const double phi_h = cert.phi.map.value_at_spectral(h);
        const double pull_x = std::sin(phi_h);
        const double pull_y = std::cos(phi_h);
        // dz-coefficient of the pullback vanishes since alpha_phi has none;
        // the analytic chain-rule factor w / phi'(h) only scales that zero
        const double dpsi = double(w) / cert.phi.map.derivative_at(h);
        (void)dpsi;
        worst = std::max({worst, std::abs(pull_x - std::sin(w * z)),
                          std::abs(pull_y - std::cos(w * z))});
    }
    return worst;
}

} // namespace reeb3
