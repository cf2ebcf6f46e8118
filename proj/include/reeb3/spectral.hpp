#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "reeb3/errors.hpp"
#include "reeb3/fft.hpp"

namespace reeb3 {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;

/// Calculus of 2*pi-periodic grid functions sampled at z_j = 2*pi*j/N,
/// j = 0..N-1, via the DFT. Signed frequencies run over -N/2 < k < N/2;
/// the Nyquist mode (even N) is dropped in derivative/antiderivative,
/// which is the usual symmetric convention.
class Spectrum {
public:
    explicit Spectrum(const std::vector<double>& values)
        : n_(values.size()), coeff_(fft_real(values)) {}

    std::size_t size() const { return n_; }

    /// Mean value of the grid function (== trapezoid average for periodic data).
    double mean() const { return coeff_[0].real() / double(n_); }

    int signed_freq(std::size_t k) const {
        return (k <= n_ / 2) ? int(k) : int(k) - int(n_);
    }

    /// Derivative at the grid nodes.
    std::vector<double> derivative_nodes() const {
        std::vector<cdouble> d(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            const int kk = signed_freq(k);
            if (2 * std::size_t(std::abs(kk)) == n_) {
                d[k] = cdouble(0.0, 0.0);
            } else {
                d[k] = coeff_[k] * cdouble(0.0, double(kk));
            }
        }
        ifft(d);
        std::vector<double> out(n_);
        for (std::size_t j = 0; j < n_; ++j) out[j] = d[j].real();
        return out;
    }

    /// Antiderivative at grid nodes, normalized so T(0) = 0:
    ///   T(z) = mean * z + sum_{k != 0} c_k / (i k) (e^{ikz} - 1).
    /// The full-period increment T(2*pi) - T(0) equals 2*pi*mean, i.e. the
    /// trapezoid value of the integral, so downstream consistency checks
    /// that compare against the full-period quadrature close exactly.
    std::vector<double> antiderivative_nodes() const {
        std::vector<cdouble> t(n_);
        t[0] = cdouble(0.0, 0.0);
        for (std::size_t k = 1; k < n_; ++k) {
            const int kk = signed_freq(k);
            if (2 * std::size_t(std::abs(kk)) == n_) {
                t[k] = cdouble(0.0, 0.0);
            } else {
                t[k] = coeff_[k] / cdouble(0.0, double(kk));
            }
        }
        ifft(t);
        const double m = mean();
        const double h = kTwoPi / double(n_);
        std::vector<double> out(n_);
        const double t0 = t[0].real();
        for (std::size_t j = 0; j < n_; ++j) out[j] = m * h * double(j) + t[j].real() - t0;
        return out;
    }

    /// Trigonometric interpolation of the value at an arbitrary point.
    double value_at(double z) const {
        double acc = coeff_[0].real();
        for (std::size_t k = 1; k <= (n_ - 1) / 2; ++k) {
            const cdouble e(std::cos(double(k) * z), std::sin(double(k) * z));
            acc += 2.0 * (coeff_[k] * e).real();
        }
        if (n_ % 2 == 0) acc += coeff_[n_ / 2].real() * std::cos(double(n_ / 2) * z);
        return acc / double(n_);
    }

    /// Trigonometric interpolation of the derivative at an arbitrary point.
    double derivative_at(double z) const {
        double acc = 0.0;
        for (std::size_t k = 1; k <= (n_ - 1) / 2; ++k) {
            const cdouble e(std::cos(double(k) * z), std::sin(double(k) * z));
            acc += 2.0 * (coeff_[k] * cdouble(0.0, double(k)) * e).real();
        }
        return acc / double(n_);
    }

private:
    std::size_t n_;
    std::vector<cdouble> coeff_;
};

/// Full-period trapezoid rule for periodic samples (v has N entries, one period).
/// Spectrally accurate for smooth periodic integrands.
inline double trapezoid_period(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s * kTwoPi / double(v.size());
}

/// Jackson-type positive smoothing kernel of order n sampled on the N-grid,
/// normalized to unit mass. The kernel is a trigonometric polynomial of
/// degree 2n-2, so for 2n-2 < N/2 circular convolution with it is an exact
/// band limitation: the output is a trig polynomial of degree <= 2n-2.
/// Positivity makes the convolution slope- and range-preserving.
inline std::vector<double> jackson_kernel(std::size_t grid_n, std::size_t order) {
    std::vector<double> w(grid_n);
    double total = 0.0;
    for (std::size_t j = 0; j < grid_n; ++j) {
        const double t = kTwoPi * double(j) / double(grid_n);
        const double s = std::sin(t / 2.0);
        double v;
        if (std::abs(s) < 1e-14) {
            v = std::pow(double(order), 4);
        } else {
            const double r = std::sin(double(order) * t / 2.0) / s;
            v = r * r * r * r;
        }
        w[j] = v;
        total += v;
    }
    for (auto& x : w) x /= total;
    return w;
}

/// Circular convolution (w must be the same length as p).
inline std::vector<double> circular_convolve(const std::vector<double>& w,
                                             const std::vector<double>& p) {
    require(w.size() == p.size(), ErrorCode::InvalidInput, "convolution length mismatch");
    auto wf = fft_real(w);
    auto pf = fft_real(p);
    for (std::size_t k = 0; k < wf.size(); ++k) wf[k] *= pf[k];
    ifft(wf);
    std::vector<double> out(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) out[j] = wf[j].real();
    return out;
}

/// Monotone (Fritsch-Carlson) cubic Hermite slopes for periodic increment data.
/// `values` holds N+1 samples of a lift; increments are treated as N-periodic.
inline std::vector<double> pchip_slopes_periodic(const std::vector<double>& values) {
    const std::size_t n = values.size() - 1;
    std::vector<double> slope(n + 1);
    const double h = kTwoPi / double(n);
    auto inc = [&](std::size_t j) { return (values[(j % n) + 1] - values[j % n]) / h; };
    for (std::size_t j = 0; j <= n; ++j) {
        const double sl = inc((j + n - 1) % n);
        const double sr = inc(j % n);
        if (sl * sr <= 0.0) {
            slope[j] = 0.0;
        } else {
            slope[j] = 2.0 * sl * sr / (sl + sr);
        }
    }
    return slope;
}

/// Cubic Hermite evaluation on [x0, x0+h] with endpoint values/slopes.
inline double hermite(double x0, double h, double y0, double y1, double m0, double m1, double x) {
    const double t = (x - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    return y0 * (2 * t3 - 3 * t2 + 1) + h * m0 * (t3 - 2 * t2 + t) + y1 * (-2 * t3 + 3 * t2) +
           h * m1 * (t3 - t2);
}

/// 5-point Gauss-Legendre cumulative quadrature of a callable on a uniform
/// grid over [a, b]; returns the running integral at the M+1 grid points.
/// For smooth integrands this is accurate to near machine precision.
template <typename F>
std::vector<double> cumulative_gauss5(F&& f, double a, double b, std::size_t cells) {
    static const double xg[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                 0.5384693101056831, 0.9061798459386640};
    static const double wg[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                 0.4786286704993665, 0.2369268850561891};
    const double h = (b - a) / double(cells);
    std::vector<double> out(cells + 1, 0.0);
    for (std::size_t c = 0; c < cells; ++c) {
        const double lo = a + h * double(c);
        double s = 0.0;
        for (int g = 0; g < 5; ++g) s += wg[g] * f(lo + 0.5 * h * (1.0 + xg[g]));
        out[c + 1] = out[c] + 0.5 * h * s;
    }
    return out;
}

} // namespace reeb3
