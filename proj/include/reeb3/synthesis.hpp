#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "reeb3/circle_map.hpp"
#include "reeb3/criterion.hpp"
#include "reeb3/errors.hpp"

namespace reeb3 {

inline constexpr double kDefaultDelta = kPi / 64.0;
inline constexpr double kDefaultEta = 1e-3;
inline constexpr double kBiasInitial = 0.05;
inline constexpr int kMaxBiasEscalations = 20;

/// Plateau intervals I_k = [theta(a_k) - pi/2, theta(b_k) + pi/2] and the
/// backward-recursion levels c_k (nondecreasing, c_k in I_k).
struct PlateauPlan {
    ExtremaList extrema;
    std::vector<std::array<double, 2>> intervals;
    std::vector<double> levels;
};

enum class Bias { Neutral, Minus, Plus };

inline const char* bias_name(Bias b) {
    switch (b) {
        case Bias::Neutral: return "neutral";
        case Bias::Minus: return "minus";
        case Bias::Plus: return "plus";
    }
    return "?";
}

/// An element of the admissible set: strictly monotone circle map of the
/// same degree as theta with sup |phi - theta| <= pi/2 - delta/2 and
/// min |phi'| >= eta on the grid.
struct PhiFunction {
    CircleMap map;
    double delta = kDefaultDelta;
    double eta = kDefaultEta;
    Bias bias = Bias::Neutral;
    double bias_magnitude = 0.0;
};

/// Generator data of a cyclic group of screw motions: translation length
/// lambda along the fiber direction, rotation angle phi, group order m.
struct ScrewData {
    double lambda = kTwoPi;
    double phi = 0.0;
    int order = 1;
};

inline void validate_screw(const ScrewData& s) {
    require(s.order >= 1, ErrorCode::InvalidInput, "group order must be positive");
    require(s.lambda > 0.0 && s.lambda <= kTwoPi, ErrorCode::InvalidInput,
            "lambda must lie in (0, 2*pi]");
    const double ml = s.order * s.lambda;
    require(std::abs(ml - kTwoPi * std::round(ml / kTwoPi)) < 1e-9, ErrorCode::InvalidInput,
            "m*lambda must be a multiple of 2*pi");
    const double mp = s.order * s.phi;
    require(std::abs(mp - kTwoPi * std::round(mp / kTwoPi)) < 1e-9, ErrorCode::InvalidInput,
            "m*phi must be a multiple of 2*pi");
}

/// sup_t |theta(t + lambda) - theta(t) - shift| on the grid, where shift is
/// the constant lift increment implied by the screw data.
inline double equivariance_residual(const CircleMap& m, const ScrewData& s, double* shift_out = nullptr) {
    validate_screw(s);
    const int n = m.grid_size();
    require(n % s.order == 0, ErrorCode::InvalidInput,
            "grid size must be divisible by the group order");
    const int step = n / s.order;
    // observed lift increment over one lambda cell
    const double shift = kTwoPi * double(m.degree()) / double(s.order);
    double worst = 0.0;
    for (int j = 0; j < n; ++j)
        worst = std::max(worst, std::abs(m.sample_ext(j + step) - m.samples()[j] - shift));
    if (shift_out) *shift_out = shift;
    return worst;
}

/// Backward recursion of the plateau construction on the full intervals.
/// Requires degree(theta) >= 1 (negative degrees are handled by reflection
/// in the callers). Empty plan for strictly monotone theta.
inline PlateauPlan plateau_levels(const CircleMap& theta, const ExtremaList& ext) {
    require(theta.degree() >= 1, ErrorCode::InvalidInput,
            "plateau recursion expects positive degree; reflect first");
    PlateauPlan plan;
    plan.extrema = ext;
    const std::size_t n = ext.count();
    if (n == 0) return plan;

    plan.intervals.resize(n);
    plan.levels.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lo = ext.theta_a[k] - kPi / 2.0;
        const double hi = ext.theta_b[k] + kPi / 2.0;
        if (!(hi - lo > 1e-12))
            fail(ErrorCode::InfeasibleIntervals,
                 "interval " + std::to_string(k + 1) + " empty: drop " +
                     std::to_string(ext.theta_a[k] - ext.theta_b[k]) + " >= pi");
        plan.intervals[k] = {lo, hi};
    }
    plan.levels[n - 1] = plan.intervals[n - 1][1];
    for (std::size_t k = n - 1; k-- > 0;)
        plan.levels[k] = std::min(plan.levels[k + 1], plan.intervals[k][1]);
    for (std::size_t k = 0; k < n; ++k)
        require(plan.levels[k] > plan.intervals[k][0], ErrorCode::InfeasibleIntervals,
                "level " + std::to_string(k + 1) + " fell below its interval");
    return plan;
}

namespace detail {

struct BuildConfig {
    double delta_req;   // requested margin (public invariant uses delta_req/2)
    double delta_work;  // working tube shrink, >= delta_req
    double eta;         // public slope floor
    double eta_build;   // construction slope floor, > eta
    Bias bias;
    double bias_s;
    int cells;          // grid nodes per construction period (N/m)
    double cell_shift;  // lift increment over one period (2*pi*deg/m)
    int band_divisor = 16; // final bandwidth = grid_size / band_divisor
};

// Monotone tube path on one rise segment [j0, j1] (extended node indices):
// anchors (j0, v) and (j1, w), floor/ceiling arrays indexed from j0, slope
// floor eta per unit length. The neutral suggestion is the straight chord;
// a bias steers it toward the extreme admissible path hugging the tube floor
// (Minus) or ceiling (Plus), which is what drives the functional
// Int tan(phi - theta) phi' strongly negative resp. positive: the integrand
// only matters where phi climbs, and there the extreme paths pin phi - theta
// near the corresponding tube boundary. bias_blend in [0, 1] interpolates
// between the chord and the extreme path.
inline void rise_segment(std::vector<double>& out, long j0, long j1, double v, double w,
                         const std::vector<double>& lo_in, const std::vector<double>& hi_in,
                         double eta_h, long base, Bias bias, double bias_blend) {
    const long len = j1 - j0;
    require(len >= 1, ErrorCode::InternalCheck, "empty rise segment");
    require(w - v >= eta_h * double(len) - 1e-10, ErrorCode::InternalCheck,
            "rise increment below slope floor");

    std::vector<double> lenv(len + 1), uenv(len + 1);
    lenv[0] = v;
    for (long i = 1; i <= len; ++i)
        lenv[i] = std::max(lenv[i - 1] + eta_h, lo_in[std::size_t(j0 - base + i)]);
    if (lenv[len] > w + 1e-10)
        fail(ErrorCode::TubeViolation, "slope-floor path exits the tube ceiling");
    uenv[len] = w;
    for (long i = len; i-- > 0;)
        uenv[i] = std::min(uenv[i + 1] - eta_h, hi_in[std::size_t(j0 - base + i)]);
    if (uenv[0] < v - 1e-10)
        fail(ErrorCode::TubeViolation, "tube floor unreachable from the left anchor");

    // Neutral suggestion: follow theta with the anchor offsets interpolated
    // linearly, blended toward the plain chord just enough to keep the slope
    // floor (theta stalls at the segment ends, where the chord takes over).
    // Staying near theta keeps tan(phi - theta) small, which is what keeps
    // the rescaling f well-conditioned downstream.
    const double theta0 = 0.5 * (lo_in[std::size_t(j0 - base)] + hi_in[std::size_t(j0 - base)]);
    const double theta1 = 0.5 * (lo_in[std::size_t(j1 - base)] + hi_in[std::size_t(j1 - base)]);
    const double off0 = v - theta0, off1 = w - theta1;
    const double chord_step = (w - v) / double(len);
    double follow_min_step = std::numeric_limits<double>::infinity();
    auto follow_at = [&](long i) {
        const double u = double(i) / double(len);
        const double th =
            0.5 * (lo_in[std::size_t(j0 - base + i)] + hi_in[std::size_t(j0 - base + i)]);
        return th + (1.0 - u) * off0 + u * off1;
    };
    for (long i = 1; i <= len; ++i)
        follow_min_step = std::min(follow_min_step, follow_at(i) - follow_at(i - 1));
    double mu = 1.0;
    if (follow_min_step < eta_h) {
        const double denom = chord_step - follow_min_step;
        mu = denom > 1e-300 ? std::max(0.0, (chord_step - eta_h) / denom) : 0.0;
        mu = std::min(mu, 1.0);
    }

    for (long i = 0; i <= len; ++i) {
        if (lenv[i] > uenv[i] + 1e-10)
            fail(ErrorCode::TubeViolation, "tube corridor pinched on a rise segment");
        const double chord = v + (w - v) * double(i) / double(len);
        double suggestion = (1.0 - mu) * chord + mu * follow_at(i);
        if (bias == Bias::Minus) {
            const double extreme = (i == len) ? w : lenv[i]; // hug the floor, leave late
            suggestion = (1.0 - bias_blend) * suggestion + bias_blend * extreme;
        } else if (bias == Bias::Plus) {
            const double extreme = (i == 0) ? v : uenv[i]; // reach the ceiling early
            suggestion = (1.0 - bias_blend) * suggestion + bias_blend * extreme;
        }
        out[std::size_t(j0 - base + i)] = std::max(lenv[i], std::min(uenv[i], suggestion));
    }
}

struct CellStructure {
    // extended node indices of plateau boundaries within one period,
    // ia[k] < ib[k] < ia[k+1], all in [ia[0], ia[0] + cells)
    std::vector<long> ia, ib;
    std::vector<double> theta_a, theta_b; // lift values at the exact extrema
};

// Raw plateau-and-rise path over one construction period, on the grid.
// Returns node values on extended indices [start, start + cells].
inline std::vector<double> raw_cell_path(const CircleMap& theta, const CellStructure& cs,
                                         const BuildConfig& cfg) {
    const double h = theta.step();
    const double eta_h = cfg.eta_build * h;
    const double width = kPi / 2.0 - cfg.delta_work;
    const std::size_t n = cs.ia.size();

    const long start = n ? cs.ia[0] : 0;
    const long cells = cfg.cells;

    // tube arrays over [start, start + cells]
    std::vector<double> lo(cells + 1), hi(cells + 1);
    for (long i = 0; i <= cells; ++i) {
        const double th = theta.sample_ext(start + i);
        lo[std::size_t(i)] = th - width;
        hi[std::size_t(i)] = th + width;
    }

    std::vector<double> out(cells + 1);

    if (n == 0) {
        // strictly monotone theta: one full-period rise anchored at theta(start)
        const double v = theta.sample_ext(start);
        const double w = v + cfg.cell_shift;
        rise_segment(out, start, start + cells, v, w, lo, hi, eta_h, start, cfg.bias,
                     std::min(1.0, cfg.bias_s / 1.6));
        return out;
    }

    // Working intervals, shrunk for the tube margin, the plateau slope drift
    // and the slope-floor escape allowance: near a plateau end the ceiling
    // rises like theta, which stalls at the critical point, so a level placed
    // exactly on the ceiling would leave no room for an eta-sloped departure.
    const double reserve = cfg.eta_build * kTwoPi;
    std::vector<double> imin(n), imax(n), mid(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double drift = cfg.eta_build * h * double(cs.ib[k] - cs.ia[k]) / 2.0;
        imin[k] = cs.theta_a[k] - width + drift + reserve;
        imax[k] = cs.theta_b[k] + width - drift - reserve;
        if (!(imax[k] > imin[k]))
            fail(ErrorCode::TubeViolation, "working interval empty; margin too small for delta");
        mid[k] = 0.5 * h * double(cs.ia[k] + cs.ib[k]);
    }

    // Cyclic level recursions with slope gaps between plateau midpoints.
    // The backward max-recursion of the plateau construction gives the
    // highest admissible levels, its forward mirror the lowest; the working
    // levels interpolate between them. Neutral builds sit in the middle
    // (plateaus straddle theta, which keeps the rescaling f tame), biased
    // builds shift toward the extreme matching the wanted sign of the
    // functional.
    std::vector<double> gap(n); // gap[k]: required level gap from k to k+1 (wrap at n-1)
    for (std::size_t k = 0; k < n; ++k) {
        const double next_mid = (k + 1 < n) ? mid[k + 1] : mid[0] + h * double(cfg.cells);
        gap[k] = cfg.eta_build * (next_mid - mid[k]);
    }
    std::vector<double> c_hi(n), c_lo(n);
    c_hi[n - 1] = imax[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) c_hi[k] = std::min(c_hi[k + 1] - gap[k], imax[k]);
    for (int round = 0; round < 6; ++round) {
        bool changed = false;
        const double wrap_bound = c_hi[0] + cfg.cell_shift - gap[n - 1];
        if (c_hi[n - 1] > wrap_bound + 1e-15) {
            c_hi[n - 1] = wrap_bound;
            changed = true;
        }
        for (std::size_t k = n - 1; k-- > 0;) {
            const double bound = c_hi[k + 1] - gap[k];
            if (c_hi[k] > bound + 1e-15) {
                c_hi[k] = bound;
                changed = true;
            }
        }
        if (!changed) break;
    }
    c_lo[0] = imin[0];
    for (std::size_t k = 1; k < n; ++k) c_lo[k] = std::max(c_lo[k - 1] + gap[k - 1], imin[k]);
    for (int round = 0; round < 6; ++round) {
        bool changed = false;
        const double wrap_bound = c_lo[n - 1] - cfg.cell_shift + gap[n - 1];
        if (c_lo[0] < wrap_bound - 1e-15) {
            c_lo[0] = wrap_bound;
            changed = true;
        }
        for (std::size_t k = 1; k < n; ++k) {
            const double bound = c_lo[k - 1] + gap[k - 1];
            if (c_lo[k] < bound - 1e-15) {
                c_lo[k] = bound;
                changed = true;
            }
        }
        if (!changed) break;
    }
    for (std::size_t k = 0; k < n; ++k)
        if (!(c_hi[k] > imin[k]) || !(c_lo[k] < imax[k]))
            fail(ErrorCode::TubeViolation, "cyclic level recursion left its interval");

    const double blend = std::min(1.0, cfg.bias_s / 1.6);
    double t_level = 0.5;
    if (cfg.bias == Bias::Minus) t_level = 0.5 * (1.0 - blend);
    if (cfg.bias == Bias::Plus) t_level = 0.5 * (1.0 + blend);
    std::vector<double> c(n);
    for (std::size_t k = 0; k < n; ++k) c[k] = (1.0 - t_level) * c_lo[k] + t_level * c_hi[k];

    // plateaus with slope eta_build, centered at the level
    for (std::size_t k = 0; k < n; ++k) {
        const double m_k = 0.5 * double(cs.ia[k] + cs.ib[k]);
        for (long j = cs.ia[k]; j <= cs.ib[k]; ++j)
            out[std::size_t(j - start)] = c[k] + eta_h * (double(j) - m_k);
    }

    // rises between consecutive plateaus (wrap rise closes the period)
    for (std::size_t k = 0; k < n; ++k) {
        const long j0 = cs.ib[k];
        const bool wrap = (k + 1 == n);
        const long j1 = wrap ? cs.ia[0] + cells : cs.ia[k + 1];
        const double v = out[std::size_t(j0 - start)];
        const double w_level = wrap ? c[0] + cfg.cell_shift : c[k + 1];
        const std::size_t kn = wrap ? 0 : k + 1;
        const double m_next = 0.5 * double(cs.ia[kn] + cs.ib[kn]) + (wrap ? double(cells) : 0.0);
        const double w = w_level + eta_h * (double(j1) - m_next);
        rise_segment(out, j0, j1, v, w, lo, hi, eta_h, start, cfg.bias,
                     std::min(1.0, cfg.bias_s / 1.6));
    }
    return out;
}

struct BuildResult {
    CircleMap map;
    double sup_dev;   // measured sup |phi - theta|
    double min_slope; // measured spectral min phi'
};

inline constexpr int kOversample = 8;

// Assemble, tile, smooth and validate one candidate phi for the given
// configuration. theta must have positive degree.
//
// The raw plateau-and-rise path is built on an oversampled grid and smoothed
// there with a positive band-limiting kernel before downsampling; sampling a
// path with slope kinks directly on the target grid would alias the kink
// spectrum onto low frequencies where no later smoothing can reach it. The
// positive kernel preserves the slope floor and the tube bound up to the
// smearing that build_phi_positive re-measures, and the downsampled result
// is band-limited well below the target Nyquist, so its spectral derivative
// is trustworthy.
inline BuildResult build_candidate(const CircleMap& theta, const ExtremaList& ext,
                                   const BuildConfig& cfg, const ScrewData& screw) {
    const int n = theta.grid_size();
    const int m = screw.order;
    const CircleMap theta_fine = theta.resampled(kOversample);
    const int nf = theta_fine.grid_size();
    const double hf = theta_fine.step();
    const int deg = theta.degree();

    // cell structure on the fine grid: extrema restricted to [a_1, a_1 + 2*pi/m)
    CellStructure cs;
    if (!ext.empty()) {
        const double t0 = ext.a[0];
        const double cell_len = kTwoPi / double(m);
        for (std::size_t k = 0; k < ext.count(); ++k) {
            if (ext.a[k] < t0 + cell_len - 1e-12) {
                long ia = std::lround(ext.a[k] / hf);
                long ib = std::lround(ext.b[k] / hf);
                if (ib <= ia) ib = ia + 1;
                if (!cs.ia.empty())
                    require(ia > cs.ib.back(), ErrorCode::InternalCheck,
                            "plateau intervals overlap after grid snapping");
                cs.ia.push_back(ia);
                cs.ib.push_back(ib);
                cs.theta_a.push_back(ext.theta_a[k]);
                cs.theta_b.push_back(ext.theta_b[k]);
            }
        }
        require(cs.ia.size() * std::size_t(m) == ext.count(), ErrorCode::NotEquivariant,
                "extremal pattern does not repeat with the screw period");
    }

    BuildConfig fine_cfg = cfg;
    fine_cfg.cells = nf / m;
    if (!cs.ia.empty())
        require(cs.ib.back() < cs.ia[0] + fine_cfg.cells, ErrorCode::InternalCheck,
                "plateau crosses the construction period");

    auto cell = raw_cell_path(theta_fine, cs, fine_cfg);

    // tile m cells over the fine grid, reduced to the periodic part
    const long start = cs.ia.empty() ? 0 : cs.ia[0];
    std::vector<double> per(std::size_t(nf), 0.0);
    for (long idx = start; idx < start + nf; ++idx) {
        const long cell_idx = (idx - start) / fine_cfg.cells;
        const long within = (idx - start) % fine_cfg.cells;
        const double val = cell[std::size_t(within)] + cfg.cell_shift * double(cell_idx);
        long jbase = idx % nf;
        if (jbase < 0) jbase += nf;
        const double wraps = std::floor(double(idx) / double(nf));
        per[std::size_t(jbase)] = val - kTwoPi * double(deg) * wraps - deg * hf * double(jbase);
    }

    // band-limiting positive smoother on the fine grid
    const std::size_t band = std::max<std::size_t>(16, std::size_t(n) / cfg.band_divisor);
    auto smoothed = circular_convolve(jackson_kernel(std::size_t(nf), band / 2 + 1), per);

    std::vector<double> samples(std::size_t(n) + 1);
    const double h = theta.step();
    for (int j = 0; j < n; ++j)
        samples[std::size_t(j)] = smoothed[std::size_t(j) * kOversample] + deg * h * j;
    samples[std::size_t(n)] = samples[0] + kTwoPi * double(deg);

    CircleMap phi(std::move(samples));
    double sup_dev = 0.0;
    for (int j = 0; j <= n; ++j)
        sup_dev = std::max(sup_dev, std::abs(phi.samples()[std::size_t(j)] -
                                             theta.samples()[std::size_t(j)]));
    const auto dphi = phi.derivative_nodes();
    double min_slope = dphi[0];
    for (double d : dphi) min_slope = std::min(min_slope, d);
    return {std::move(phi), sup_dev, min_slope};
}

inline double functional_theta_form(const CircleMap& theta, const CircleMap& phi) {
    const int n = theta.grid_size();
    require(phi.grid_size() == n, ErrorCode::InvalidInput, "grid mismatch");
    const auto dth = theta.derivative_nodes();
    std::vector<double> integrand(std::size_t(n), 0.0);
    for (int j = 0; j < n; ++j) {
        const double dev = phi.samples()[std::size_t(j)] - theta.samples()[std::size_t(j)];
        if (std::abs(dev) >= kPi / 2.0 - 1e-6)
            fail(ErrorCode::TanOverflow, "phi leaves the open tube of width pi/2");
        integrand[std::size_t(j)] = std::tan(dev) * dth[std::size_t(j)];
    }
    return trapezoid_period(integrand);
}

// Core builder on a positive-degree theta; handles working-margin selection,
// validation retries and bias escalation.
inline PhiFunction build_phi_positive(const CircleMap& theta, const ExtremaList& ext,
                                      double delta, double eta, Bias bias,
                                      const ScrewData& screw) {
    require(theta.degree() >= 1, ErrorCode::InternalCheck, "builder expects positive degree");
    require(delta > 0.0 && delta < kPi / 4.0, ErrorCode::InvalidInput,
            "delta must lie in (0, pi/4)");
    require(eta > 0.0 && eta < 0.5, ErrorCode::InvalidInput, "eta must lie in (0, 0.5)");
    const auto [dd, w] = max_drawdown(theta);
    (void)w;
    const double margin = kPi - dd;
    if (!(margin > 2.5 * delta))
        fail(ErrorCode::TubeViolation,
             "delta " + std::to_string(delta) + " too large for criterion margin " +
                 std::to_string(margin));

    BuildConfig cfg;
    cfg.delta_req = delta;
    cfg.eta = eta;
    cfg.eta_build = 1.25 * eta;
    cfg.bias = bias;
    cfg.bias_s = (bias == Bias::Neutral) ? 0.0 : kBiasInitial;
    cfg.cells = theta.grid_size() / screw.order;
    cfg.cell_shift = kTwoPi * double(theta.degree()) / double(screw.order);

    const double base_work = std::min({std::max(delta, margin / 3.0), 0.35, margin / 2.5});

    auto attempt = [&](double bias_s) -> BuildResult {
        cfg.bias_s = bias_s;
        std::string last_tube_error;
        for (double extra : {0.0, 0.05, 0.15}) {
            cfg.delta_work = std::min(base_work + extra, margin / 2.5);
            try {
                auto cand = build_candidate(theta, ext, cfg, screw);
                const bool tube_ok = cand.sup_dev <= kPi / 2.0 - 0.5 * delta;
                const bool slope_ok = cand.min_slope >= eta;
                if (tube_ok && slope_ok) return cand;
                last_tube_error = "validation failed: sup_dev=" + std::to_string(cand.sup_dev) +
                                  " min_slope=" + std::to_string(cand.min_slope);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::TubeViolation) throw;
                last_tube_error = e.what();
            }
        }
        fail(ErrorCode::TubeViolation, last_tube_error);
    };

    if (bias == Bias::Neutral) {
        auto result = attempt(0.0);
        return {std::move(result.map), delta, eta, bias, 0.0};
    }

    const double want = (bias == Bias::Minus) ? -1.0 : 1.0;
    auto signed_I = [&](const BuildResult& r) {
        return want * functional_theta_form(theta, r.map);
    };

    // escalate the steering until the functional has the wanted sign
    double s_ok = -1.0, s_prev = 0.0;
    BuildResult result = attempt(cfg.bias_s);
    if (signed_I(result) > 1e-13) return {std::move(result.map), delta, eta, bias, cfg.bias_s};
    for (int escalation = 0;; ++escalation) {
        if (escalation >= kMaxBiasEscalations)
            fail(ErrorCode::MaxBias, "bias sign not achieved after " +
                                         std::to_string(kMaxBiasEscalations) + " escalations");
        s_prev = cfg.bias_s;
        const double s_next = cfg.bias_s * 2.0;
        result = attempt(s_next);
        if (signed_I(result) > 1e-13) {
            s_ok = s_next;
            break;
        }
        cfg.bias_s = s_next;
    }

    // back off toward the mildest bracketing function: an overshot steering
    // makes the balanced rescaling needlessly stiff (large swings of f)
    for (int it = 0; it < 10; ++it) {
        const double s_mid = 0.5 * (s_prev + s_ok);
        auto cand = attempt(s_mid);
        const double i_mid = signed_I(cand);
        if (i_mid > 1e-13) {
            s_ok = s_mid;
            result = std::move(cand);
            if (i_mid < 0.5) break; // mild enough
        } else {
            s_prev = s_mid;
        }
    }
    return {std::move(result.map), delta, eta, bias, s_ok};
}

} // namespace detail

/// Construct an admissible phi for theta from a plateau plan. deg < 0 inputs
/// are reflected, synthesized, and negated; the bias sign refers to the
/// functional I of the original orientation.
inline PhiFunction build_phi(const CircleMap& theta, const PlateauPlan& plan, double delta,
                             double eta, Bias bias) {
    if (theta.degree() >= 1) {
        ScrewData trivial{kTwoPi, 0.0, 1};
        return detail::build_phi_positive(theta, plan.extrema, delta, eta, bias, trivial);
    }
    require(theta.degree() <= -1, ErrorCode::ZeroDegree, "cannot synthesize for degree zero");
    const CircleMap refl = theta.reflected();
    const auto rext = find_extrema(refl);
    ScrewData trivial{kTwoPi, 0.0, 1};
    PhiFunction pr = detail::build_phi_positive(refl, rext, delta, eta, bias, trivial);
    PhiFunction out{pr.map.reflected(), pr.delta, pr.eta, bias, pr.bias_magnitude};
    return out;
}

/// Equivariant variant: phi(t + lambda) = phi(t) + shift with the shift
/// implied by the screw data, built cell-by-cell so the relation is exact.
inline PhiFunction build_equivariant_phi(const CircleMap& theta, const ScrewData& screw,
                                         double delta, double eta, Bias bias) {
    validate_screw(screw);
    double shift = 0.0;
    const double resid = equivariance_residual(theta, screw, &shift);
    if (resid >= 1e-9)
        fail(ErrorCode::NotEquivariant,
             "theta(t+lambda)-theta(t) deviates from the screw shift by " + std::to_string(resid));
    // the lift shift must reduce to the rotation angle mod 2*pi
    const double phase_err = std::abs(std::remainder(shift - screw.phi, kTwoPi));
    if (phase_err >= 1e-9)
        fail(ErrorCode::NotEquivariant, "screw rotation angle inconsistent with degree");

    if (theta.degree() >= 1) {
        const auto ext = find_extrema(theta);
        return detail::build_phi_positive(theta, ext, delta, eta, bias, screw);
    }
    require(theta.degree() <= -1, ErrorCode::ZeroDegree, "cannot synthesize for degree zero");
    const CircleMap refl = theta.reflected();
    ScrewData mirrored = screw;
    mirrored.phi = -screw.phi;
    const auto rext = find_extrema(refl);
    PhiFunction pr = detail::build_phi_positive(refl, rext, delta, eta, bias, mirrored);
    return {pr.map.reflected(), pr.delta, pr.eta, bias, pr.bias_magnitude};
}

/// One-sided 4th-order estimates of phi' from each side of the seam
/// t = lambda, on a sub-grid spacing so the stencil truncation noise sits
/// far below the 1e-6 reporting threshold. A genuine slope jump across the
/// seam would survive in the interpolant and register at its full size.
inline double seam_c1_mismatch(const CircleMap& phi, const ScrewData& screw) {
    const int n = phi.grid_size();
    require(n % screw.order == 0, ErrorCode::InvalidInput, "grid/order mismatch");
    const double seam = kTwoPi / double(screw.order);
    const double d = phi.step() / 8.0;
    auto s = [&](int i) { return phi.value_at_spectral(seam + d * i); };
    const double left =
        (25.0 * s(0) - 48.0 * s(-1) + 36.0 * s(-2) - 16.0 * s(-3) + 3.0 * s(-4)) / (12.0 * d);
    const double right =
        (-25.0 * s(0) + 48.0 * s(1) - 36.0 * s(2) + 16.0 * s(3) - 3.0 * s(4)) / (12.0 * d);
    return std::abs(left - right);
}

} // namespace reeb3
