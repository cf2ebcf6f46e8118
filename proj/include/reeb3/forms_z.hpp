#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "reeb3/circle_map.hpp"
#include "reeb3/errors.hpp"
#include "reeb3/spectral.hpp"
#include "reeb3/synthesis.hpp" // ScrewData

namespace reeb3 {

/// Fiber area of the standard normal form: the tori {z = const} have area (2*pi)^2.
inline constexpr double kFiberArea = kTwoPi * kTwoPi;

namespace detail {
inline void check_periodic(const std::vector<double>& v, const char* name) {
    require(v.size() >= std::size_t(kMinGridSize + 1), ErrorCode::InvalidInput,
            std::string(name) + ": need at least 65 samples");
    require(std::abs(v.front() - v.back()) <= 1e-12, ErrorCode::InvalidInput,
            std::string(name) + ": samples not periodic");
}
} // namespace detail

/// 1-form p(z) dx + q(z) dy + r(z) dz with 2*pi-periodic coefficients
/// sampled at z_j = 2*pi*j/N, j = 0..N.
struct ZOneForm {
    std::vector<double> p, q, r;

    ZOneForm() = default;
    ZOneForm(std::vector<double> p_, std::vector<double> q_, std::vector<double> r_)
        : p(std::move(p_)), q(std::move(q_)), r(std::move(r_)) {
        detail::check_periodic(p, "p");
        detail::check_periodic(q, "q");
        detail::check_periodic(r, "r");
        require(p.size() == q.size() && q.size() == r.size(), ErrorCode::InvalidInput,
                "coefficient grids differ");
    }

    int grid_size() const { return int(p.size()) - 1; }
};

/// 2-form A(z) dy^dz + B(z) dz^dx + C(z) dx^dy.
struct ZTwoForm {
    std::vector<double> A, B, C;
    int grid_size() const { return int(A.size()) - 1; }
};

/// Vector field u(z) E1 + v(z) E2 + w(z) E3.
struct ZVectorField {
    std::vector<double> u, v, w;
    int grid_size() const { return int(u.size()) - 1; }
};

/// alpha_phi = sin(phi(z)) dx + cos(phi(z)) dy, the model connection/contact form.
inline ZOneForm angle_one_form(const CircleMap& phi) {
    const int n = phi.grid_size();
    std::vector<double> p(n + 1), q(n + 1), r(n + 1, 0.0);
    for (int j = 0; j <= n; ++j) {
        p[j] = std::sin(phi.samples()[j]);
        q[j] = std::cos(phi.samples()[j]);
    }
    p[n] = p[0];
    q[n] = q[0];
    return ZOneForm(std::move(p), std::move(q), std::move(r));
}

/// X = sin(theta(z)) E1 + cos(theta(z)) E2 (unit geodesic field tangent to the fibers).
inline ZVectorField angle_vector_field(const CircleMap& theta, double scale = 1.0) {
    const int n = theta.grid_size();
    ZVectorField V;
    V.u.resize(n + 1);
    V.v.resize(n + 1);
    V.w.assign(n + 1, 0.0);
    for (int j = 0; j <= n; ++j) {
        V.u[j] = scale * std::sin(theta.samples()[j]);
        V.v[j] = scale * std::cos(theta.samples()[j]);
    }
    V.u[n] = V.u[0];
    V.v[n] = V.v[0];
    return V;
}

inline ZVectorField scaled_field(const CircleMap& theta, const std::vector<double>& f) {
    const int n = theta.grid_size();
    require(f.size() == std::size_t(n + 1), ErrorCode::InvalidInput, "scale grid mismatch");
    ZVectorField V = angle_vector_field(theta);
    for (int j = 0; j <= n; ++j) {
        V.u[j] *= f[j];
        V.v[j] *= f[j];
    }
    return V;
}

namespace detail {
inline std::vector<double> periodic_derivative(const std::vector<double>& v) {
    std::vector<double> head(v.begin(), v.end() - 1);
    Spectrum s(head);
    auto d = s.derivative_nodes();
    d.push_back(d[0]);
    return d;
}
} // namespace detail

/// d(p dx + q dy + r dz) = -q' dy^dz + p' dz^dx (the dz coefficient is closed).
inline ZTwoForm exterior_derivative_z(const ZOneForm& a) {
    ZTwoForm d;
    d.B = detail::periodic_derivative(a.p);
    d.A = detail::periodic_derivative(a.q);
    for (auto& x : d.A) x = -x;
    d.C.assign(a.p.size(), 0.0);
    return d;
}

/// Coefficient of dx^dy^dz in alpha ^ d(alpha): q p' - p q'.
inline std::vector<double> contact_density(const ZOneForm& a) {
    const auto d = exterior_derivative_z(a);
    std::vector<double> out(a.p.size());
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = a.p[j] * d.A[j] + a.q[j] * d.B[j] + a.r[j] * d.C[j];
    return out;
}

/// Interior product i_V omega for omega = A dy^dz + B dz^dx + C dx^dy:
///   i_V omega = (B w - C v) dx + (C u - A w) dy + (A v - B u) dz.
inline ZOneForm contract(const ZVectorField& V, const ZTwoForm& w) {
    const std::size_t n = w.A.size();
    require(V.u.size() == n, ErrorCode::InvalidInput, "field/form grid mismatch");
    std::vector<double> p(n), q(n), r(n);
    for (std::size_t j = 0; j < n; ++j) {
        p[j] = w.B[j] * V.w[j] - w.C[j] * V.v[j];
        q[j] = w.C[j] * V.u[j] - w.A[j] * V.w[j];
        r[j] = w.A[j] * V.v[j] - w.B[j] * V.u[j];
    }
    return ZOneForm(std::move(p), std::move(q), std::move(r));
}

/// Residuals of the Reeb equations for (alpha, V):
///   pairing    sup_z |alpha(V) - 1|
///   contraction sup-norm of i_V d(alpha) over all three components.
struct ReebResidual {
    double pairing = 0.0;
    double contraction = 0.0;
};

inline ReebResidual reeb_residual(const ZOneForm& a, const ZVectorField& V) {
    require(a.p.size() == V.u.size(), ErrorCode::InvalidInput, "grid mismatch");
    ReebResidual res;
    for (std::size_t j = 0; j < a.p.size(); ++j) {
        const double pair = a.p[j] * V.u[j] + a.q[j] * V.v[j] + a.r[j] * V.w[j];
        res.pairing = std::max(res.pairing, std::abs(pair - 1.0));
    }
    const auto c = contract(V, exterior_derivative_z(a));
    for (std::size_t j = 0; j < c.p.size(); ++j) {
        res.contraction = std::max({res.contraction, std::abs(c.p[j]), std::abs(c.q[j]),
                                    std::abs(c.r[j])});
    }
    return res;
}

/// vol = integral over T^3 of alpha ^ d(alpha) = A_fiber * Int density dz.
inline double volume_z(const ZOneForm& a) {
    auto dens = contact_density(a);
    dens.pop_back(); // one period for the trapezoid rule
    return kFiberArea * trapezoid_period(dens);
}

/// Volume independence of the connection-form choice for X_theta.
///
/// The z-only connection forms for X = sin(theta)E1 + cos(theta)E2 are
/// alpha_1 + rho(z) dz: adding mu(z)(cos(theta)dx - sin(theta)dy) breaks
/// i_X d(alpha) = 0 with residual |mu * theta'| unless mu*theta' == 0, so the
/// mu-term is only admitted when it verifiably preserves the conditions.
/// Returns the volume difference; the Wadsley residuals of both forms are
/// written to the optional out-parameters and must be checked first.
struct ConnectionComparison {
    double volume_difference = 0.0;
    double volume_first = 0.0;
    double volume_second = 0.0;
    ReebResidual wadsley_first;
    ReebResidual wadsley_second;
    bool second_admissible = false;
};

inline ConnectionComparison check_connection_volume_independence(const CircleMap& theta,
                                                                 double c = 0.3,
                                                                 double mu = 0.0) {
    const int n = theta.grid_size();
    const ZOneForm a1 = angle_one_form(theta);
    const ZVectorField X = angle_vector_field(theta);

    ZOneForm a2 = a1;
    for (int j = 0; j <= n; ++j) {
        const double z = theta.node(j);
        a2.r[j] = c + 0.25 * std::sin(z) + 0.1 * std::cos(2.0 * z);
        if (mu != 0.0) {
            a2.p[j] += mu * std::cos(theta.samples()[j]);
            a2.q[j] -= mu * std::sin(theta.samples()[j]);
        }
    }
    a2.r[n] = a2.r[0];

    ConnectionComparison cmp;
    cmp.wadsley_first = reeb_residual(a1, X);
    cmp.wadsley_second = reeb_residual(a2, X);
    // sin/cos of theta are not band-limited, so the spectral contraction
    // carries a few-ulp aliasing tail; 1e-10 separates it cleanly from any
    // genuine defect (the inadmissible mu-term shows up at |mu * theta'|)
    cmp.second_admissible =
        cmp.wadsley_second.pairing < 1e-10 && cmp.wadsley_second.contraction < 1e-10;
    cmp.volume_first = volume_z(a1);
    cmp.volume_second = volume_z(a2);
    cmp.volume_difference = std::abs(cmp.volume_first - cmp.volume_second);
    return cmp;
}

/// Contact positivity along the segment (1-t) alpha_0 + t alpha_1,
/// t in {0, 0.1, ..., 1}. Admissible pairs are those with parallel Reeb
/// lines (the kernel lines of the d's agree to 1e-9 at every node) or
/// pointwise-proportional forms (same contact structure up to a positive
/// factor); in both cases the segment has nowhere-vanishing density.
inline double check_gray_segment(const ZOneForm& a0, const ZOneForm& a1) {
    require(a0.p.size() == a1.p.size(), ErrorCode::InvalidInput, "grid mismatch");

    bool conformal = true;
    for (std::size_t j = 0; j < a0.p.size() && conformal; ++j) {
        const double n0 = std::sqrt(a0.p[j] * a0.p[j] + a0.q[j] * a0.q[j] + a0.r[j] * a0.r[j]);
        const double n1 = std::sqrt(a1.p[j] * a1.p[j] + a1.q[j] * a1.q[j] + a1.r[j] * a1.r[j]);
        const double cx = a0.q[j] * a1.r[j] - a0.r[j] * a1.q[j];
        const double cy = a0.r[j] * a1.p[j] - a0.p[j] * a1.r[j];
        const double cz = a0.p[j] * a1.q[j] - a0.q[j] * a1.p[j];
        if (std::sqrt(cx * cx + cy * cy + cz * cz) >= 1e-9 * n0 * n1) conformal = false;
    }
    if (!conformal) {
        const auto d0 = exterior_derivative_z(a0);
        const auto d1 = exterior_derivative_z(a1);
        // ker d(alpha) is spanned by (A, B, 0); compare the lines projectively
        for (std::size_t j = 0; j < d0.A.size(); ++j) {
            const double n0 = std::hypot(d0.A[j], d0.B[j]);
            const double n1 = std::hypot(d1.A[j], d1.B[j]);
            require(n0 > 0.0 && n1 > 0.0, ErrorCode::PreconditionFailed,
                    "degenerate d(alpha) kernel line");
            const double cross = std::abs(d0.A[j] * d1.B[j] - d0.B[j] * d1.A[j]) / (n0 * n1);
            if (cross >= 1e-9)
                fail(ErrorCode::PreconditionFailed,
                     "Reeb lines disagree at node " + std::to_string(j));
        }
    }
    const auto dens0 = contact_density(a0);
    const auto dens1 = contact_density(a1);
    for (std::size_t j = 0; j < dens0.size(); ++j) {
        if (dens0[j] * dens1[j] <= 0.0)
            fail(ErrorCode::PreconditionFailed, "contact densities differ in sign");
    }
    const double sign = dens0[0] > 0.0 ? 1.0 : -1.0;

    double min_density = std::numeric_limits<double>::infinity();
    const std::size_t n = a0.p.size();
    for (int ti = 0; ti <= 10; ++ti) {
        const double t = double(ti) / 10.0;
        std::vector<double> p(n), q(n), r(n);
        for (std::size_t j = 0; j < n; ++j) {
            p[j] = (1.0 - t) * a0.p[j] + t * a1.p[j];
            q[j] = (1.0 - t) * a0.q[j] + t * a1.q[j];
            r[j] = (1.0 - t) * a0.r[j] + t * a1.r[j];
        }
        const auto dens = contact_density(ZOneForm(std::move(p), std::move(q), std::move(r)));
        for (double x : dens) min_density = std::min(min_density, sign * x);
    }
    return min_density;
}

/// Volumes upstairs and downstairs of the covering T^3 -> T^3/Gamma, with the
/// integer-winding form of the volume relation asserted.
struct CoveringVolume {
    double vol_torus = 0.0;
    double vol_quotient = 0.0;
};

inline CoveringVolume covering_volume(const CircleMap& theta, const ScrewData& s) {
    const double resid = equivariance_residual(theta, s);
    if (resid >= 1e-9)
        fail(ErrorCode::NotEquivariant, "theta not equivariant; residual " + std::to_string(resid));
    CoveringVolume out;
    out.vol_torus = volume_z(angle_one_form(theta));
    out.vol_quotient = out.vol_torus / double(s.order);
    const double winding_check =
        out.vol_quotient * double(s.order) / kFiberArea / kTwoPi - double(theta.degree());
    require(std::abs(winding_check) < 1e-9, ErrorCode::InternalCheck,
            "volume relation |Gamma| vol / (A * 2*pi) != degree");
    return out;
}

} // namespace reeb3
