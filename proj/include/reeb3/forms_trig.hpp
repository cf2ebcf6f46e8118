#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "reeb3/errors.hpp"
#include "reeb3/fft.hpp"
#include "reeb3/spectral.hpp"

namespace reeb3 {

/// Real trigonometric polynomial on T^3 with integer frequencies |k| <= band,
/// stored as a dense complex coefficient tensor with conjugate symmetry
/// c(-k) = conj(c(k)). Exterior calculus on these tables is exact: d acts by
/// i*k, wedge products by coefficient convolution.
class TrigScalar {
public:
    explicit TrigScalar(int band = 0)
        : band_(band), dim_(2 * band + 1), c_(std::size_t(dim_) * dim_ * dim_, cdouble(0.0)) {}

    int band() const { return band_; }

    cdouble& at(int kx, int ky, int kz) {
        return c_[idx(kx, ky, kz)];
    }
    cdouble at(int kx, int ky, int kz) const {
        if (std::abs(kx) > band_ || std::abs(ky) > band_ || std::abs(kz) > band_)
            return cdouble(0.0);
        return c_[idx(kx, ky, kz)];
    }

    /// Enforce c(-k) = conj(c(k)); call after filling coefficients by hand.
    void symmetrize() {
        TrigScalar tmp(*this);
        for (int kx = -band_; kx <= band_; ++kx)
            for (int ky = -band_; ky <= band_; ++ky)
                for (int kz = -band_; kz <= band_; ++kz)
                    at(kx, ky, kz) = 0.5 * (tmp.at(kx, ky, kz) + std::conj(tmp.at(-kx, -ky, -kz)));
    }

    TrigScalar derivative(int axis) const {
        TrigScalar out(band_);
        for (int kx = -band_; kx <= band_; ++kx)
            for (int ky = -band_; ky <= band_; ++ky)
                for (int kz = -band_; kz <= band_; ++kz) {
                    const int k = axis == 0 ? kx : (axis == 1 ? ky : kz);
                    out.at(kx, ky, kz) = at(kx, ky, kz) * cdouble(0.0, double(k));
                }
        return out;
    }

    friend TrigScalar operator+(const TrigScalar& a, const TrigScalar& b) {
        const int band = std::max(a.band_, b.band_);
        TrigScalar out(band);
        for (int kx = -band; kx <= band; ++kx)
            for (int ky = -band; ky <= band; ++ky)
                for (int kz = -band; kz <= band; ++kz)
                    out.at(kx, ky, kz) = a.at(kx, ky, kz) + b.at(kx, ky, kz);
        return out;
    }
    friend TrigScalar operator-(const TrigScalar& a, const TrigScalar& b) {
        const int band = std::max(a.band_, b.band_);
        TrigScalar out(band);
        for (int kx = -band; kx <= band; ++kx)
            for (int ky = -band; ky <= band; ++ky)
                for (int kz = -band; kz <= band; ++kz)
                    out.at(kx, ky, kz) = a.at(kx, ky, kz) - b.at(kx, ky, kz);
        return out;
    }

    /// Coefficient convolution == pointwise product of the polynomials.
    friend TrigScalar operator*(const TrigScalar& a, const TrigScalar& b) {
        TrigScalar out(a.band_ + b.band_);
        for (int ax = -a.band_; ax <= a.band_; ++ax)
            for (int ay = -a.band_; ay <= a.band_; ++ay)
                for (int az = -a.band_; az <= a.band_; ++az) {
                    const cdouble ca = a.at(ax, ay, az);
                    if (ca == cdouble(0.0)) continue;
                    for (int bx = -b.band_; bx <= b.band_; ++bx)
                        for (int by = -b.band_; by <= b.band_; ++by)
                            for (int bz = -b.band_; bz <= b.band_; ++bz) {
                                const cdouble cb = b.at(bx, by, bz);
                                if (cb == cdouble(0.0)) continue;
                                out.at(ax + bx, ay + by, az + bz) += ca * cb;
                            }
                }
        return out;
    }

    /// Average over T^3 (the k = 0 coefficient).
    double mean() const { return at(0, 0, 0).real(); }

    /// Values on the uniform n^3 grid, staged one axis at a time.
    std::vector<double> eval_grid(int n) const {
        const int d = dim_;
        std::vector<cdouble> ez(std::size_t(d) * n), ey(ez), ex(ez);
        for (int k = -band_; k <= band_; ++k)
            for (int g = 0; g < n; ++g) {
                const double ang = double(k) * kTwoPi * double(g) / double(n);
                ez[std::size_t(k + band_) * n + g] = cdouble(std::cos(ang), std::sin(ang));
            }
        ey = ez;
        ex = ez;

        // contract kz
        std::vector<cdouble> s1(std::size_t(d) * d * n, cdouble(0.0));
        for (int kx = 0; kx < d; ++kx)
            for (int ky = 0; ky < d; ++ky)
                for (int kz = 0; kz < d; ++kz) {
                    const cdouble cc = c_[(std::size_t(kx) * d + ky) * d + kz];
                    if (cc == cdouble(0.0)) continue;
                    for (int gz = 0; gz < n; ++gz)
                        s1[(std::size_t(kx) * d + ky) * n + gz] +=
                            cc * ez[std::size_t(kz) * n + gz];
                }
        // contract ky
        std::vector<cdouble> s2(std::size_t(d) * n * n, cdouble(0.0));
        for (int kx = 0; kx < d; ++kx)
            for (int ky = 0; ky < d; ++ky)
                for (int gy = 0; gy < n; ++gy) {
                    const cdouble e = ey[std::size_t(ky) * n + gy];
                    for (int gz = 0; gz < n; ++gz)
                        s2[(std::size_t(kx) * n + gy) * n + gz] +=
                            e * s1[(std::size_t(kx) * d + ky) * n + gz];
                }
        // contract kx
        std::vector<double> out(std::size_t(n) * n * n, 0.0);
        for (int gx = 0; gx < n; ++gx)
            for (int kx = 0; kx < d; ++kx) {
                const cdouble e = ex[std::size_t(kx) * n + gx];
                for (int gy = 0; gy < n; ++gy)
                    for (int gz = 0; gz < n; ++gz)
                        out[(std::size_t(gx) * n + gy) * n + gz] +=
                            (e * s2[(std::size_t(kx) * n + gy) * n + gz]).real();
            }
        return out;
    }

private:
    std::size_t idx(int kx, int ky, int kz) const {
        return (std::size_t(kx + band_) * dim_ + std::size_t(ky + band_)) * dim_ +
               std::size_t(kz + band_);
    }
    int band_;
    int dim_;
    std::vector<cdouble> c_;
};

/// Band-limited 1-form f1 dx + f2 dy + f3 dz with full (x, y, z) dependence.
struct TrigOneForm {
    TrigScalar f1, f2, f3;

    static TrigOneForm random(int band, std::mt19937_64& rng, double amplitude = 1.0) {
        auto rnd = [&](void) { return double(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
        TrigOneForm a{TrigScalar(band), TrigScalar(band), TrigScalar(band)};
        for (TrigScalar* s : {&a.f1, &a.f2, &a.f3}) {
            for (int kx = -band; kx <= band; ++kx)
                for (int ky = -band; ky <= band; ++ky)
                    for (int kz = -band; kz <= band; ++kz)
                        s->at(kx, ky, kz) = amplitude * cdouble(rnd(), rnd());
            s->symmetrize();
        }
        return a;
    }
};

/// 2-form A dy^dz + B dz^dx + C dx^dy.
struct TrigTwoForm {
    TrigScalar A, B, C;
};

inline TrigTwoForm exterior_derivative(const TrigOneForm& a) {
    return {a.f3.derivative(1) - a.f2.derivative(2), a.f1.derivative(2) - a.f3.derivative(0),
            a.f2.derivative(0) - a.f1.derivative(1)};
}

inline TrigTwoForm wedge11(const TrigOneForm& a, const TrigOneForm& b) {
    return {a.f2 * b.f3 - a.f3 * b.f2, a.f3 * b.f1 - a.f1 * b.f3, a.f1 * b.f2 - a.f2 * b.f1};
}

/// Density (dx^dy^dz coefficient) of a 1-form wedged with a 2-form.
inline TrigScalar wedge12(const TrigOneForm& a, const TrigTwoForm& w) {
    return a.f1 * w.A + a.f2 * w.B + a.f3 * w.C;
}

/// Density of d(omega) for a 2-form omega.
inline TrigScalar exterior_derivative_density(const TrigTwoForm& w) {
    return w.A.derivative(0) + w.B.derivative(1) + w.C.derivative(2);
}

struct IdentityResidual {
    double pointwise = 0.0;       // sup |LHS - RHS| over the sample grid
    double integral = 0.0;        // |Int LHS - Int RHS| (equispaced quadrature)
    double exact_term_integral = 0.0; // |Int d(alpha ^ beta)|
};

/// The two sides of
///   alpha^d(alpha) - beta^d(beta) = (alpha-beta)^(d alpha + d beta) + d(alpha^beta)
/// compared pointwise on a grid and in the mean. The closed-manifold input
/// Int d(alpha^beta) = 0 is reported separately.
inline IdentityResidual check_identity_31(const TrigOneForm& a, const TrigOneForm& b,
                                          int grid = 32) {
    const TrigTwoForm da = exterior_derivative(a);
    const TrigTwoForm db = exterior_derivative(b);

    const TrigScalar lhs = wedge12(a, da) - wedge12(b, db);
    const TrigOneForm diff{a.f1 - b.f1, a.f2 - b.f2, a.f3 - b.f3};
    const TrigTwoForm dsum{da.A + db.A, da.B + db.B, da.C + db.C};
    const TrigScalar exact = exterior_derivative_density(wedge11(a, b));
    const TrigScalar rhs = wedge12(diff, dsum) + exact;

    IdentityResidual res;
    const auto gl = lhs.eval_grid(grid);
    const auto gr = rhs.eval_grid(grid);
    for (std::size_t j = 0; j < gl.size(); ++j)
        res.pointwise = std::max(res.pointwise, std::abs(gl[j] - gr[j]));

    const double cell = std::pow(kTwoPi / double(grid), 3);
    double il = 0.0, ir = 0.0;
    for (std::size_t j = 0; j < gl.size(); ++j) {
        il += gl[j];
        ir += gr[j];
    }
    res.integral = std::abs(il - ir) * cell;

    const auto ge = exact.eval_grid(grid);
    double ie = 0.0;
    for (double v : ge) ie += v;
    res.exact_term_integral = std::abs(ie) * cell;
    return res;
}

} // namespace reeb3
