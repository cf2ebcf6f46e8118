#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace reeb3 {

using cdouble = std::complex<double>;

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 Cooley-Tukey. n must be a power of two.
inline void fft_pow2(std::vector<cdouble>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * 3.14159265358979323846 / double(len);
        const cdouble wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cdouble w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                cdouble u = a[i + j];
                cdouble v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        for (auto& x : a) x /= double(n);
    }
}

// Bluestein chirp-z transform for arbitrary n, expressed through a
// power-of-two convolution. Phase arguments are reduced exactly via
// k^2 mod 2n in integer arithmetic.
inline void fft_bluestein(std::vector<cdouble>& a, bool inverse) {
    const std::size_t n = a.size();
    const double pi = 3.14159265358979323846;
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;

    std::vector<cdouble> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t k2 = (std::uint64_t(k) * k) % (2 * n);
        const double ang = (inverse ? 1.0 : -1.0) * pi * double(k2) / double(n);
        chirp[k] = cdouble(std::cos(ang), std::sin(ang));
    }

    std::vector<cdouble> x(m, cdouble(0.0, 0.0)), y(m, cdouble(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
    y[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) y[k] = y[m - k] = std::conj(chirp[k]);

    fft_pow2(x, false);
    fft_pow2(y, false);
    for (std::size_t k = 0; k < m; ++k) x[k] *= y[k];
    fft_pow2(x, true);

    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
    if (inverse) {
        for (auto& v : a) v /= double(n);
    }
}

} // namespace detail

/// Forward DFT, unnormalized: X_k = sum_j x_j exp(-2*pi*i*j*k/n). Any n >= 1.
inline void fft(std::vector<cdouble>& a) {
    if (a.size() <= 1) return;
    if (detail::is_power_of_two(a.size()))
        detail::fft_pow2(a, false);
    else
        detail::fft_bluestein(a, false);
}

/// Inverse DFT, normalized by 1/n.
inline void ifft(std::vector<cdouble>& a) {
    if (a.size() <= 1) return;
    if (detail::is_power_of_two(a.size()))
        detail::fft_pow2(a, true);
    else
        detail::fft_bluestein(a, true);
}

/// DFT of a real sequence; returns the full complex spectrum of length n.
inline std::vector<cdouble> fft_real(const std::vector<double>& x) {
    std::vector<cdouble> a(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) a[j] = cdouble(x[j], 0.0);
    fft(a);
    return a;
}

} // namespace reeb3
