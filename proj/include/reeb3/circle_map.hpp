#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "reeb3/errors.hpp"
#include "reeb3/spectral.hpp"

namespace reeb3 {

inline constexpr int kMinGridSize = 64;
inline constexpr double kDefaultFlatTol = 1e-9;
inline constexpr double kEndpointSnapTol = 1e-12;

/// A circle map S^1 -> S^1 represented through its real lift sampled on the
/// uniform grid z_j = 2*pi*j/N, j = 0..N. The endpoint gap samples[N] -
/// samples[0] is an exact integer multiple of 2*pi (the winding degree);
/// it is validated to 1e-12 at construction and then snapped exactly.
///
/// Off-grid values come from a monotone-preserving cubic interpolant of the
/// lift, extended by theta(t + 2*pi) = theta(t) + 2*pi*degree. Spectral
/// calculus (derivative, antiderivative, trig interpolation) acts on the
/// periodic part theta(z) - degree*z and is exact for band-limited data.
class CircleMap {
public:
    explicit CircleMap(std::vector<double> lift, double snap_tol = kEndpointSnapTol)
        : samples_(std::move(lift)) {
        require(samples_.size() >= std::size_t(kMinGridSize + 1), ErrorCode::InvalidInput,
                "need at least 65 samples (N >= 64)");
        n_ = int(samples_.size()) - 1;
        const double gap = samples_[n_] - samples_[0];
        const double d = std::round(gap / kTwoPi);
        require(std::abs(gap - kTwoPi * d) <= snap_tol, ErrorCode::InvalidInput,
                "endpoint gap " + std::to_string(gap) + " is not a multiple of 2*pi");
        degree_ = int(d);
        samples_[n_] = samples_[0] + kTwoPi * d;

        std::vector<double> periodic(n_);
        const double h = kTwoPi / double(n_);
        for (int j = 0; j < n_; ++j) periodic[j] = samples_[j] - degree_ * h * double(j);
        spectrum_ = std::make_shared<Spectrum>(periodic);
        pchip_ = std::make_shared<std::vector<double>>(pchip_slopes_periodic(samples_));
    }

    template <typename F>
    static CircleMap from_lift(F&& lift_fn, int grid_n) {
        std::vector<double> s(grid_n + 1);
        for (int j = 0; j <= grid_n; ++j) s[j] = lift_fn(kTwoPi * double(j) / double(grid_n));
        // closed forms evaluated at 2*pi may miss the exact gap by a few ulp
        return CircleMap(std::move(s), 1e-9);
    }

    int grid_size() const { return n_; }
    int degree() const { return degree_; }
    double node(int j) const { return kTwoPi * double(j) / double(n_); }
    double step() const { return kTwoPi / double(n_); }
    const std::vector<double>& samples() const { return samples_; }

    /// Lift sample with periodic-degree extension, any integer index.
    double sample_ext(long j) const {
        long q = j / n_, r = j % n_;
        if (r < 0) { r += n_; --q; }
        return samples_[std::size_t(r)] + kTwoPi * double(degree_) * double(q);
    }

    /// Lift value at an arbitrary point (monotone-cubic interpolation).
    double operator()(double t) const {
        const double h = step();
        double cell = std::floor(t / h);
        long j = long(cell);
        double x0 = h * cell;
        // guard against t exactly on a node with rounding
        if (t - x0 >= h) { ++j; x0 += h; }
        const std::size_t jm = std::size_t(((j % n_) + n_) % n_);
        const double y0 = sample_ext(j), y1 = sample_ext(j + 1);
        const double m0 = (*pchip_)[jm], m1 = (*pchip_)[jm + 1 == std::size_t(n_) ? 0 : jm + 1];
        // slopes are those of the base period; they repeat because increments do
        return hermite(x0, h, y0, y1, m0, m1, t);
    }

    /// theta' at the grid nodes (N values, spectral).
    std::vector<double> derivative_nodes() const {
        auto d = spectrum_->derivative_nodes();
        for (auto& x : d) x += double(degree_);
        return d;
    }

    /// theta' at an arbitrary point (trigonometric interpolation).
    double derivative_at(double t) const {
        return double(degree_) + spectrum_->derivative_at(t);
    }

    /// Trig-interpolated lift value (used where spectral consistency matters).
    double value_at_spectral(double t) const {
        return double(degree_) * t + spectrum_->value_at(t);
    }

    const Spectrum& spectrum() const { return *spectrum_; }

    CircleMap reflected() const {
        std::vector<double> s(samples_.size());
        for (std::size_t j = 0; j < samples_.size(); ++j) s[j] = -samples_[j];
        return CircleMap(std::move(s));
    }

    /// Trigonometric resampling of the periodic part onto a grid refined by
    /// the given factor (exact for band-limited lifts).
    CircleMap resampled(int factor) const {
        const int nf = n_ * factor;
        std::vector<double> s(std::size_t(nf) + 1);
        const double hf = kTwoPi / double(nf);
        // zero-padded spectrum of the periodic part
        std::vector<double> per(std::size_t(n_), 0.0);
        const double h = step();
        for (int j = 0; j < n_; ++j) per[std::size_t(j)] = samples_[std::size_t(j)] - degree_ * h * j;
        auto coeff = fft_real(per);
        std::vector<cdouble> padded(std::size_t(nf), cdouble(0.0));
        for (int k = 0; k < n_; ++k) {
            const int kk = (k <= n_ / 2) ? k : k - n_;
            if (2 * std::abs(kk) == n_) { // split the Nyquist mode symmetrically
                padded[std::size_t((kk + nf) % nf)] += 0.5 * coeff[std::size_t(k)];
                padded[std::size_t((-kk + nf) % nf)] += 0.5 * coeff[std::size_t(k)];
            } else {
                padded[std::size_t((kk + nf) % nf)] = coeff[std::size_t(k)];
            }
        }
        ifft(padded);
        const double scale = double(factor);
        for (int j = 0; j < nf; ++j)
            s[std::size_t(j)] = scale * padded[std::size_t(j)].real() + degree_ * hf * j;
        s[std::size_t(nf)] = s[0] + kTwoPi * degree_;
        return CircleMap(std::move(s), 1e-9);
    }

    CircleMap shifted(double c) const {
        std::vector<double> s(samples_);
        for (auto& x : s) x += c;
        return CircleMap(std::move(s));
    }

private:
    std::vector<double> samples_;
    int n_ = 0;
    int degree_ = 0;
    std::shared_ptr<Spectrum> spectrum_;
    std::shared_ptr<std::vector<double>> pchip_;
};

/// Alternating extrema of the lift: a_1 < b_1 < ... < a_n < b_n with a_k
/// local maxima and b_k local minima, rotated so the first listed extremum
/// is a maximum; entries may exceed 2*pi after rotation but stay within
/// [a_1, a_1 + 2*pi). Values are lift values at the stored coordinates.
struct ExtremaList {
    std::vector<double> a;        // maxima positions
    std::vector<double> b;        // minima positions
    std::vector<double> theta_a;  // lift at a_k
    std::vector<double> theta_b;  // lift at b_k
    bool perturbed = false;       // set when the C0-small perturbation was applied
    double perturbation = 0.0;

    std::size_t count() const { return a.size(); }
    bool empty() const { return a.empty(); }
};

/// unwrap values given mod 2*pi into a lift; jumps must resolve within
/// (-pi/2, pi/2) of one of the two branch choices.
inline CircleMap lift_samples(const std::vector<double>& raw,
                              std::optional<int> degree_hint = std::nullopt) {
    require(raw.size() >= std::size_t(kMinGridSize + 1), ErrorCode::InvalidInput,
            "need at least 65 samples");
    std::vector<double> lift(raw.size());
    lift[0] = raw[0];
    for (std::size_t j = 1; j < raw.size(); ++j) {
        double d = std::fmod(raw[j] - raw[j - 1], kTwoPi);
        if (d >= kPi) d -= kTwoPi;
        if (d < -kPi) d += kTwoPi;
        if (std::abs(d) >= kPi / 2.0)
            fail(ErrorCode::AmbiguousLift,
                 "jump of " + std::to_string(d) + " at sample " + std::to_string(j));
        lift[j] = lift[j - 1] + d;
    }
    // snap the endpoint gap to the nearest multiple of 2*pi
    const double gap = lift.back() - lift.front();
    const double d = std::round(gap / kTwoPi);
    require(std::abs(gap - kTwoPi * d) < kPi / 2.0, ErrorCode::AmbiguousLift,
            "endpoint gap not near a multiple of 2*pi");
    lift.back() = lift.front() + kTwoPi * d;
    if (degree_hint && *degree_hint != int(d))
        fail(ErrorCode::DegreeMismatch, "hint " + std::to_string(*degree_hint) +
                                            " vs unwrapped degree " + std::to_string(int(d)));
    return CircleMap(std::move(lift));
}

inline int degree(const CircleMap& m) { return m.degree(); }

inline double evaluate_lift(const CircleMap& m, double t) { return m(t); }

inline std::vector<double> derivative(const CircleMap& m) { return m.derivative_nodes(); }

namespace detail {

// Refine a root of theta' inside [lo, hi] (sign change assumed) by bisection
// on the trig-interpolated derivative.
inline double refine_derivative_root(const CircleMap& m, double lo, double hi) {
    double flo = m.derivative_at(lo);
    for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = m.derivative_at(mid);
        if ((flo <= 0.0) == (fm <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct Crossing {
    double pos;
    bool is_max; // derivative goes + -> -
};

} // namespace detail

/// Locate the alternating maxima/minima of the lift. Empty result iff theta'
/// never changes sign. Throws DegenerateCritical when theta' hugs zero over
/// more than 4 grid cells without a sign change across the flat stretch.
inline ExtremaList find_extrema(const CircleMap& m, double flat_tol = kDefaultFlatTol) {
    const int n = m.grid_size();
    const auto d = m.derivative_nodes();

    std::vector<int> sign(n);
    bool any_nonzero = false;
    for (int j = 0; j < n; ++j) {
        sign[j] = (d[j] > flat_tol) ? 1 : (d[j] < -flat_tol ? -1 : 0);
        if (sign[j] != 0) any_nonzero = true;
    }
    if (!any_nonzero)
        fail(ErrorCode::DegenerateCritical, "derivative within flat_tol on the whole circle");

    // Walk zero-runs and strict-sign blocks cyclically, starting from a
    // nonzero node so runs are not split by the wrap.
    int start = 0;
    while (sign[start] == 0) ++start;

    std::vector<detail::Crossing> crossings;
    const double h = m.step();
    int prev_sign = sign[start];
    int run_start = -1, run_len = 0;
    for (int step = 1; step <= n; ++step) {
        const int j = (start + step) % n;
        if (sign[j] == 0) {
            if (run_len == 0) run_start = start + step;
            ++run_len;
            continue;
        }
        if (sign[j] != prev_sign) {
            // sign change, possibly across a zero-run; bracket runs from the
            // last strict-sign node to the current one (walk coordinates)
            const double lo_t = h * double(start + step - run_len - 1);
            const double hi_t = h * double(start + step);
            const double pos = detail::refine_derivative_root(m, lo_t, hi_t);
            crossings.push_back({std::fmod(pos + kTwoPi, kTwoPi), prev_sign > 0});
            prev_sign = sign[j];
        } else if (run_len > 4) {
            fail(ErrorCode::DegenerateCritical,
                 "flat derivative over " + std::to_string(run_len) +
                     " cells without a sign change near z=" + std::to_string(m.node(run_start % n)));
        }
        run_len = 0;
    }

    ExtremaList out;
    if (crossings.empty()) return out; // strictly monotone

    std::sort(crossings.begin(), crossings.end(),
              [](const detail::Crossing& x, const detail::Crossing& y) { return x.pos < y.pos; });

    // rotate so the first listed extremum is a maximum
    std::size_t first_max = 0;
    while (first_max < crossings.size() && !crossings[first_max].is_max) ++first_max;
    require(first_max < crossings.size(), ErrorCode::InternalCheck, "no maximum among crossings");

    const std::size_t cnt = crossings.size();
    require(cnt % 2 == 0, ErrorCode::InternalCheck, "extrema count must be even");
    for (std::size_t i = 0; i < cnt; ++i) {
        const auto& c = crossings[(first_max + i) % cnt];
        const double pos = c.pos + ((first_max + i) >= cnt ? kTwoPi : 0.0);
        const bool expect_max = (i % 2 == 0);
        require(c.is_max == expect_max, ErrorCode::InternalCheck, "extrema fail to alternate");
        if (expect_max) {
            out.a.push_back(pos);
            out.theta_a.push_back(m(pos));
        } else {
            out.b.push_back(pos);
            out.theta_b.push_back(m(pos));
        }
    }
    return out;
}

/// find_extrema with the C0-small perturbation policy: on DegenerateCritical
/// the map is replaced by theta + 10*flat_tol*sin(z + rho) for a sequence of
/// phases rho, and the result is flagged as perturbed. Returns the effective
/// map alongside the extrema so downstream synthesis stays consistent.
struct PerturbedExtrema {
    ExtremaList extrema;
    CircleMap theta;
};

inline PerturbedExtrema find_extrema_with_perturbation(const CircleMap& m,
                                                       double flat_tol = kDefaultFlatTol) {
    try {
        return {find_extrema(m, flat_tol), m};
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateCritical) throw;
    }
    const double delta = 10.0 * flat_tol;
    static const double phases[] = {0.0, 0.7, 1.3, 2.1, 2.9, 3.7, 4.5, 5.3};
    for (double rho : phases) {
        std::vector<double> s(m.samples());
        for (int j = 0; j <= m.grid_size(); ++j) s[j] += delta * std::sin(m.node(j) + rho);
        CircleMap p(std::move(s));
        try {
            auto ext = find_extrema(p, flat_tol);
            ext.perturbed = true;
            ext.perturbation = delta;
            return {std::move(ext), std::move(p)};
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateCritical) throw;
        }
    }
    fail(ErrorCode::DegenerateCritical, "degenerate critical set survives perturbation");
}

} // namespace reeb3
