#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "reeb3/errors.hpp"
#include "reeb3/spectral.hpp"

namespace reeb3 {

/// Angle profile for the open-manifold example: a smooth degree-zero circle
/// map theta(z) with theta(0) = 0, theta(pi) = -pi, close to -z on [0, pi]
/// and to z - 2*pi on [pi, 2*pi], extended 2*pi-periodically along the
/// noncompact z-direction.
struct OpenThetaSpec {
    std::function<double(double)> theta;
    std::function<double(double)> dtheta;
    double z_min = -4.0 * kPi;
    double z_max = 4.0 * kPi;
    int grid = 4096;
};

namespace detail {
inline double smoothstep5(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}
inline double smoothstep5_deriv(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return 30.0 * u * u * (1.0 - u) * (1.0 - u);
}
} // namespace detail

/// The concrete profile: -z and z - 2*pi branches joined over windows of
/// width 0.2 at the two turning points. At pi the smoothstep blend keeps the
/// anchor theta(pi) = -pi exact. At 0 the corner of -|z| is rounded with the
/// hyperbola r - sqrt(z^2 + r^2), which stays at or below both branches:
/// staying nonpositive there is what keeps F * sin(theta) >= 0 away from the
/// pi-window, and theta(0) = 0 holds exactly.
inline OpenThetaSpec default_open_theta() {
    constexpr double half = 0.1;  // half-width of each blend window
    constexpr double r = 0.035;   // corner-rounding radius at the turning point 0
    auto theta = [=](double z) {
        double t = std::fmod(z, kTwoPi);
        if (t < -half) t += kTwoPi; // base period [-0.1, 2*pi - 0.1)
        if (t > kPi + half && t < kTwoPi - half) return t - kTwoPi;
        if (t >= kPi - half && t <= kPi + half) { // turning point at pi
            const double u = (t - (kPi - half)) / (2.0 * half);
            return -t + detail::smoothstep5(u) * (2.0 * t - kTwoPi);
        }
        if (t >= half && t <= kPi) return -t;
        // turning point at 0: hyperbola rounding blended into -|t|
        const double s = (t >= kTwoPi - half) ? t - kTwoPi : t;
        const double b = detail::smoothstep5(std::abs(s) / half);
        const double round = r - std::sqrt(s * s + r * r);
        return (1.0 - b) * round + b * (-std::abs(s));
    };
    auto dtheta = [=](double z) {
        double t = std::fmod(z, kTwoPi);
        if (t < -half) t += kTwoPi;
        if (t > kPi + half && t < kTwoPi - half) return 1.0;
        if (t >= kPi - half && t <= kPi + half) {
            const double u = (t - (kPi - half)) / (2.0 * half);
            return -1.0 + 2.0 * detail::smoothstep5(u) +
                   detail::smoothstep5_deriv(u) * (2.0 * t - kTwoPi) / (2.0 * half);
        }
        if (t >= half && t <= kPi) return -1.0;
        const double s = (t >= kTwoPi - half) ? t - kTwoPi : t;
        const double sign = s >= 0.0 ? 1.0 : -1.0;
        const double b = detail::smoothstep5(std::abs(s) / half);
        const double db = detail::smoothstep5_deriv(std::abs(s) / half) * sign / half;
        const double round = r - std::sqrt(s * s + r * r);
        const double dround = -s / std::sqrt(s * s + r * r);
        return (1.0 - b) * dround + b * (-sign) + db * (-std::abs(s) - round);
    };
    return {theta, dtheta, -4.0 * kPi, 4.0 * kPi, 4096};
}

/// Pointwise verification report for the constructive open-manifold example
/// alpha = beta + 2*eps*alpha_theta with beta = F(z) dx + y sin(theta) dz.
struct ExampleIReport {
    double min_alpha_X = 0.0;         // min of alpha(X) = F sin(theta) + 2 eps
    double contraction_residual = 0.0; // sup |i_X d(alpha)|
    double min_nondegeneracy = 0.0;   // min of (1 + 2 eps theta') (d(alpha) on the plane field)
    double proportionality_residual = 0.0; // |d(alpha) - (1+2 eps theta') d(beta)| sup-norm
    double min_F = 0.0, max_F = 0.0;
    std::vector<double> z, F;
};

inline ExampleIReport build_example_i(const OpenThetaSpec& spec, double eps) {
    require(std::abs(spec.theta(0.0)) < 1e-12, ErrorCode::AnchorViolation, "theta(0) != 0");
    require(std::abs(spec.theta(kPi) + kPi) < 1e-9, ErrorCode::AnchorViolation,
            "theta(pi) != -pi");
    require(eps > 0.0, ErrorCode::InvalidInput, "eps must be positive");

    const int m = spec.grid;
    ExampleIReport rep;
    rep.z.resize(m + 1);
    for (int j = 0; j <= m; ++j)
        rep.z[j] = spec.z_min + (spec.z_max - spec.z_min) * double(j) / double(m);

    // eps condition first: 1 + 2 eps theta' > 0 on the grid
    double min_nd = std::numeric_limits<double>::infinity();
    for (double z : rep.z) min_nd = std::min(min_nd, 1.0 + 2.0 * eps * spec.dtheta(z));
    if (!(min_nd > 0.0))
        fail(ErrorCode::EpsilonTooLarge, "1 + 2*eps*theta' reaches " + std::to_string(min_nd));
    rep.min_nondegeneracy = min_nd;

    // F(z) = Int_0^z cos(theta) - 1 by per-cell Gauss quadrature from z = 0
    // (the grid is aligned so z = 0 is a node)
    require(spec.z_min < 0.0 && spec.z_max > 0.0, ErrorCode::InvalidInput,
            "z-range must contain 0");
    const int j0 = int(std::lround(-spec.z_min / (spec.z_max - spec.z_min) * m));
    require(std::abs(rep.z[j0]) < 1e-12, ErrorCode::InvalidInput, "grid must contain z = 0");
    auto cos_theta = [&](double z) { return std::cos(spec.theta(z)); };
    const auto up = cumulative_gauss5(cos_theta, 0.0, spec.z_max, std::size_t(m - j0));
    const auto down = cumulative_gauss5([&](double z) { return -cos_theta(-z); }, 0.0, -spec.z_min,
                                        std::size_t(j0));
    rep.F.resize(m + 1);
    for (int j = j0; j <= m; ++j) rep.F[j] = up[std::size_t(j - j0)] - 1.0;
    for (int j = 0; j < j0; ++j) rep.F[j] = down[std::size_t(j0 - j)] - 1.0;
    rep.min_F = rep.max_F = rep.F[0];

    double min_alpha = std::numeric_limits<double>::infinity();
    double worst_contraction = 0.0;
    double worst_prop = 0.0;
    for (int j = 0; j <= m; ++j) {
        const double z = rep.z[j];
        const double th = spec.theta(z), dth = spec.dtheta(z);
        const double s = std::sin(th), c = std::cos(th);
        rep.min_F = std::min(rep.min_F, rep.F[j]);
        rep.max_F = std::max(rep.max_F, rep.F[j]);

        min_alpha = std::min(min_alpha, rep.F[j] * s + 2.0 * eps);

        // d(beta) = cos(theta) dz^dx + sin(theta) dy^dz (F' = cos(theta) analytically)
        // d(alpha) = d(beta) + 2 eps d(alpha_theta),
        //   d(alpha_theta) = theta' sin dy^dz + theta' cos dz^dx
        const double A = s + 2.0 * eps * dth * s; // dy^dz
        const double B = c + 2.0 * eps * dth * c; // dz^dx
        // i_X d(alpha) for X = (sin, cos, 0): (B*0 - 0, 0 - A*0, A*cos - B*sin)
        worst_contraction = std::max(worst_contraction, std::abs(A * c - B * s));
        // proportionality d(alpha) = (1 + 2 eps theta') d(beta), component-wise
        const double fac = 1.0 + 2.0 * eps * dth;
        worst_prop = std::max({worst_prop, std::abs(A - fac * s), std::abs(B - fac * c)});
    }
    rep.min_alpha_X = min_alpha;
    rep.contraction_residual = worst_contraction;
    rep.proportionality_residual = worst_prop;
    return rep;
}

/// Report for the transversality counterexample: X = dy + dz crosses the
/// torus {z = 0} while Y = sin(phi(z)) dx + cos(phi(z)) dy induces a contact
/// structure and stays nowhere orthogonal to X.
struct ExampleIIReport {
    double min_inner_product = 0.0; // min over the grid of <X, Y> = cos(phi)
    double certified_lower_bound = 0.0;
    double min_phi_prime = 0.0;
    double phi_prime_at_zero = 0.0;
    double transversality_pairing = 0.0; // dz(X) on {z = 0}
};

inline ExampleIIReport check_example_ii(double z_bound = 20.0, int grid = 4001) {
    auto phi = [](double z) { return 0.5 * std::atan(z); }; // R -> (-pi/4, pi/4)
    auto dphi = [](double z) { return 0.5 / (1.0 + z * z); };
    ExampleIIReport rep;
    rep.certified_lower_bound = std::cos(kPi / 4.0);
    rep.min_inner_product = std::numeric_limits<double>::infinity();
    rep.min_phi_prime = std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid; ++j) {
        const double z = -z_bound + 2.0 * z_bound * double(j) / double(grid - 1);
        rep.min_inner_product = std::min(rep.min_inner_product, std::cos(phi(z)));
        rep.min_phi_prime = std::min(rep.min_phi_prime, dphi(z));
    }
    rep.phi_prime_at_zero = dphi(0.0);
    rep.transversality_pairing = 1.0; // dz(∂y + ∂z) = 1 identically on {z = 0}
    return rep;
}

} // namespace reeb3
