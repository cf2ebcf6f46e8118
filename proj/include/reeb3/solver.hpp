#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "reeb3/circle_map.hpp"
#include "reeb3/criterion.hpp"
#include "reeb3/errors.hpp"
#include "reeb3/forms_z.hpp"
#include "reeb3/synthesis.hpp"

namespace reeb3 {

inline constexpr double kAgreementTol = 1e-8;
inline constexpr double kBalanceTol = 1e-10;
inline constexpr int kMaxBisection = 200;

/// Certificate residuals; each entry is checked against its tolerance when
/// the certificate is assembled.
struct CertificateResiduals {
    double I_residual = 0.0;          // |I(phi*)| after balancing
    double f_periodicity = 0.0;       // |f(2*pi)/f(0) - 1|
    double reeb_alpha = 0.0;          // sup |alpha(f X) - 1|
    double reeb_contraction = 0.0;    // sup-norm of i_{fX} d(alpha)
    double min_contact_density = 0.0; // min of sign(w) * phi'/g^2
    double ode_residual = 0.0;        // sup |f' cos(phi-theta) + f theta' sin(phi-theta)|
    double gray_min_density = 0.0;    // min interpolated density, alpha_phi vs (1/g)alpha_phi
    double tube_margin = 0.0;         // pi/2 - sup|phi - theta|
    double min_slope = 0.0;           // min sign(w) * phi'
};

/// Result of the synthesis pipeline: the rescaling f with f(z) X = R_{(1/g)alpha_phi}.
struct ReebCertificate {
    CircleMap theta;
    PhiFunction phi;
    std::vector<double> f; // N+1 positive samples, f[0] = 1
    std::vector<double> g; // g = f * cos(phi - theta)
    int winding = 0;       // degree of theta
    double n_value = 0.0;  // 2*pi * winding
    bool perturbed_input = false;
    CertificateResiduals residuals;
};

/// I(phi) = Int_0^{2*pi} tan(phi - theta) theta' dt. Both the theta'- and the
/// phi'-form are computed; their agreement (the substitution identity) is
/// asserted to kAgreementTol and the theta'-form is returned.
inline double functional_I(const CircleMap& theta, const PhiFunction& phi) {
    const double i_theta = detail::functional_theta_form(theta, phi.map);
    const int n = theta.grid_size();
    const auto dphi = phi.map.derivative_nodes();
    std::vector<double> integrand(std::size_t(n), 0.0);
    for (int j = 0; j < n; ++j) {
        const double dev = phi.map.samples()[j] - theta.samples()[j];
        integrand[j] = std::tan(dev) * dphi[j];
    }
    const double i_phi = trapezoid_period(integrand);
    require(std::abs(i_theta - i_phi) < kAgreementTol, ErrorCode::InternalCheck,
            "quadrature forms of I disagree: " + std::to_string(i_theta) + " vs " +
                std::to_string(i_phi));
    return i_theta;
}

/// Convex combination (1-s) phi_minus + s phi_plus, sample-wise.
inline PhiFunction blend_phi(const PhiFunction& lo, const PhiFunction& hi, double s) {
    const std::size_t n = lo.map.samples().size();
    require(hi.map.samples().size() == n, ErrorCode::InvalidInput, "grid mismatch");
    std::vector<double> samples(n);
    for (std::size_t j = 0; j < n; ++j)
        samples[j] = (1.0 - s) * lo.map.samples()[j] + s * hi.map.samples()[j];
    PhiFunction out{CircleMap(std::move(samples)), std::min(lo.delta, hi.delta),
                    std::min(lo.eta, hi.eta), Bias::Neutral, 0.0};
    return out;
}

/// Bisection on s in [0,1] for a zero of s -> I((1-s)phi_minus + s phi_plus).
/// Only the sign bracket is assumed (continuity, not monotonicity).
inline PhiFunction find_balanced_phi(const CircleMap& theta, const PhiFunction& phi_minus,
                                     const PhiFunction& phi_plus) {
    double i_lo = functional_I(theta, phi_minus);
    double i_hi = functional_I(theta, phi_plus);
    if (!(i_lo < 0.0 && i_hi > 0.0))
        fail(ErrorCode::BadBracket, "need I(phi-) < 0 < I(phi+), got " + std::to_string(i_lo) +
                                        " and " + std::to_string(i_hi));
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < kMaxBisection; ++it) {
        const double mid = 0.5 * (lo + hi);
        PhiFunction cand = blend_phi(phi_minus, phi_plus, mid);
        const double i_mid = functional_I(theta, cand);
        if (std::abs(i_mid) < kBalanceTol) return cand;
        if (i_mid < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    PhiFunction cand = blend_phi(phi_minus, phi_plus, 0.5 * (lo + hi));
    const double i_final = functional_I(theta, cand);
    fail(ErrorCode::NoConvergence,
         "bisection stalled with |I| = " + std::to_string(std::abs(i_final)) + " after " +
             std::to_string(kMaxBisection) + " steps");
}

/// f(z) = exp(-Int_0^z tan(phi - theta) theta' dt) on the grid, f(0) = 1.
/// The cumulative quadrature is the spectral antiderivative; its full-period
/// increment coincides with the trapezoid value of I, so the periodicity
/// residual |f(2*pi) - 1| mirrors |exp(-I) - 1| exactly.
inline std::pair<std::vector<double>, double> integrate_log_f(const CircleMap& theta,
                                                              const PhiFunction& phi) {
    const int n = theta.grid_size();
    const auto dth = theta.derivative_nodes();
    std::vector<double> integrand(std::size_t(n), 0.0);
    for (int j = 0; j < n; ++j) {
        const double dev = phi.map.samples()[j] - theta.samples()[j];
        if (std::abs(dev) >= kPi / 2.0 - 1e-6)
            fail(ErrorCode::TanOverflow, "phi leaves the open tube of width pi/2");
        integrand[j] = std::tan(dev) * dth[j];
    }
    Spectrum spec(integrand);
    const auto T = spec.antiderivative_nodes();
    std::vector<double> f(std::size_t(n) + 1);
    for (int j = 0; j < n; ++j) f[j] = std::exp(-T[j]);
    f[n] = std::exp(-(spec.mean() * kTwoPi)); // = exp(-I) by construction
    const double residual = std::abs(f[n] - 1.0);
    return {std::move(f), residual};
}

/// Sup-norm of f' cos(phi-theta) + f theta' sin(phi-theta) over the grid,
/// with f' obtained by spectral differentiation of log f and the chain rule.
inline double verify_ode_residual(const CircleMap& theta, const PhiFunction& phi,
                                  const std::vector<double>& f) {
    const int n = theta.grid_size();
    require(f.size() == std::size_t(n + 1), ErrorCode::InvalidInput, "f grid mismatch");
    std::vector<double> logf(std::size_t(n), 0.0);
    for (int j = 0; j < n; ++j) logf[j] = std::log(f[j]);
    Spectrum spec(logf);
    const auto dlog = spec.derivative_nodes();
    const auto dth = theta.derivative_nodes();
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        const double dev = phi.map.samples()[j] - theta.samples()[j];
        const double fp = f[j] * dlog[j];
        worst = std::max(worst,
                         std::abs(fp * std::cos(dev) + f[j] * dth[j] * std::sin(dev)));
    }
    return worst;
}

struct SynthesisOptions {
    double delta = kDefaultDelta;
    double eta = kDefaultEta;
    double flat_tol = kDefaultFlatTol;
    double decision_tol = kDecisionTol;
    bool adapt_delta = true; // shrink delta when the criterion margin is tight
};

namespace detail {

// (1/g) alpha_phi as a sampled ZOneForm.
inline ZOneForm certificate_form(const PhiFunction& phi, const std::vector<double>& g) {
    const int n = phi.map.grid_size();
    std::vector<double> p(n + 1), q(n + 1), r(n + 1, 0.0);
    for (int j = 0; j <= n; ++j) {
        p[j] = std::sin(phi.map.samples()[j]) / g[j];
        q[j] = std::cos(phi.map.samples()[j]) / g[j];
    }
    p[n] = p[0];
    q[n] = q[0];
    return ZOneForm(std::move(p), std::move(q), std::move(r));
}

} // namespace detail

/// Full pipeline: criterion, extrema (with the perturbation policy), plateau
/// plan, biased pair, balanced phi*, the rescaling f, g = f cos(phi-theta),
/// and the embedded verification residuals.
inline ReebCertificate synthesize_certificate(const CircleMap& theta_in,
                                              const SynthesisOptions& opt = {}) {
    const ReebDecision dec = decide(theta_in, opt.decision_tol);
    if (dec.verdict != Verdict::ConformallyReeb) {
        std::string msg = "criterion rejected: " + dec.reason;
        if (dec.witness)
            msg += " (drop " + std::to_string(dec.witness->drop) + " at a=" +
                   std::to_string(dec.witness->a) + ", b=" + std::to_string(dec.witness->b) + ")";
        fail(ErrorCode::CriterionFailed, msg);
    }

    double delta = opt.delta;
    if (opt.adapt_delta) {
        const double margin = kPi - dec.max_drawdown;
        delta = std::min(delta, margin / 3.0);
    }

    // positive-degree working copy; reflect back at the end
    const bool reflected = theta_in.degree() < 0;
    const CircleMap theta_pos = reflected ? theta_in.reflected() : theta_in;

    auto pe = find_extrema_with_perturbation(theta_pos, opt.flat_tol);
    const CircleMap& theta = pe.theta; // possibly perturbed, used consistently below
    const PlateauPlan plan = plateau_levels(theta, pe.extrema);

    // the neutral construction often balances on its own (exactly so for
    // monotone profiles, where phi == theta); only bracket and bisect when
    // it does not
    ScrewData trivial{kTwoPi, 0.0, 1};
    PhiFunction phi_star =
        detail::build_phi_positive(theta, plan.extrema, delta, kDefaultEta, Bias::Neutral, trivial);
    if (std::abs(functional_I(theta, phi_star)) >= kBalanceTol) {
        PhiFunction phi_minus = detail::build_phi_positive(theta, plan.extrema, delta,
                                                           kDefaultEta, Bias::Minus, trivial);
        PhiFunction phi_plus = detail::build_phi_positive(theta, plan.extrema, delta,
                                                          kDefaultEta, Bias::Plus, trivial);
        phi_star = find_balanced_phi(theta, phi_minus, phi_plus);
    }
    phi_star.delta = delta;

    ReebCertificate cert{reflected ? theta.reflected() : theta,
                         reflected ? PhiFunction{phi_star.map.reflected(), phi_star.delta,
                                                 phi_star.eta, phi_star.bias, 0.0}
                                   : phi_star,
                         {},
                         {},
                         0,
                         0.0,
                         pe.extrema.perturbed,
                         {}};
    cert.winding = cert.theta.degree();
    cert.n_value = kTwoPi * double(cert.winding);

    // f and g are orientation-independent (I is invariant under reflection)
    auto [f, period_resid] = integrate_log_f(cert.theta, cert.phi);
    cert.residuals.I_residual = std::abs(functional_I(cert.theta, cert.phi));
    cert.residuals.f_periodicity = period_resid;
    cert.residuals.ode_residual = verify_ode_residual(cert.theta, cert.phi, f);

    const int n = cert.theta.grid_size();
    cert.f = std::move(f);
    cert.g.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        const double dev = cert.phi.map.samples()[j] - cert.theta.samples()[j];
        cert.g[j] = cert.f[j] * std::cos(dev);
        require(cert.f[j] > 0.0 && cert.g[j] > 0.0, ErrorCode::InternalCheck,
                "f and g must be positive");
    }

    const double sign = cert.winding > 0 ? 1.0 : -1.0;
    const auto dphi = cert.phi.map.derivative_nodes();
    double min_slope = std::numeric_limits<double>::infinity();
    double min_density = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        min_slope = std::min(min_slope, sign * dphi[j]);
        min_density = std::min(min_density, sign * dphi[j] / (cert.g[j] * cert.g[j]));
    }
    cert.residuals.min_slope = min_slope;
    cert.residuals.min_contact_density = min_density;

    double sup_dev = 0.0;
    for (int j = 0; j <= n; ++j)
        sup_dev = std::max(sup_dev, std::abs(cert.phi.map.samples()[j] - cert.theta.samples()[j]));
    cert.residuals.tube_margin = kPi / 2.0 - sup_dev;

    const ZOneForm alpha = detail::certificate_form(cert.phi, cert.g);
    const ZVectorField fX = scaled_field(cert.theta, cert.f);
    const ReebResidual rr = reeb_residual(alpha, fX);
    cert.residuals.reeb_alpha = rr.pairing;
    cert.residuals.reeb_contraction = rr.contraction;

    const ZOneForm alpha_phi = angle_one_form(cert.phi.map);
    cert.residuals.gray_min_density = check_gray_segment(alpha_phi, alpha);

    return cert;
}

} // namespace reeb3
