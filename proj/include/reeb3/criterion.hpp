#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "reeb3/circle_map.hpp"
#include "reeb3/errors.hpp"

namespace reeb3 {

inline constexpr double kDecisionTol = 1e-7;

/// Maximizing pair of the drawdown search. For degree > 0 the drop is
/// theta(a) - theta(b) with a < b; mirrored for degree < 0.
struct DrawdownWitness {
    double a = 0.0;
    double b = 0.0;
    double drop = 0.0;
};

enum class Verdict { ConformallyReeb, NotReeb };

inline const char* verdict_name(Verdict v) {
    return v == Verdict::ConformallyReeb ? "ConformallyReeb" : "NotReeb";
}

struct ReebDecision {
    Verdict verdict = Verdict::NotReeb;
    int degree = 0;
    double max_drawdown = 0.0;
    std::optional<DrawdownWitness> witness;
    double margin = 0.0; // pi - max_drawdown
    std::string reason;
};

namespace detail {

// Extended sample s_i, i = 0..2N: second period shifted by 2*pi*degree.
// For |degree| >= 1 any depressed pair further apart than one period is
// dominated by its translate inside the period, so a prefix scan over the
// doubled array realizes the windowed supremum in O(N).
struct DrawdownScan {
    double value = 0.0;
    long arg_hi = 0; // index attaining the running extreme
    long arg_lo = 0; // index of the matched sample
};

inline DrawdownScan streaming_drawdown(const CircleMap& m, bool falling) {
    const int n = m.grid_size();
    DrawdownScan best;
    if (falling) {
        double run_max = m.sample_ext(0);
        long run_arg = 0;
        for (long j = 0; j <= 2 * n; ++j) {
            const double s = m.sample_ext(j);
            if (s > run_max) { run_max = s; run_arg = j; }
            const double drop = run_max - s;
            if (drop > best.value) { best = {drop, run_arg, j}; }
        }
    } else {
        double run_min = m.sample_ext(0);
        long run_arg = 0;
        for (long j = 0; j <= 2 * n; ++j) {
            const double s = m.sample_ext(j);
            if (s < run_min) { run_min = s; run_arg = j; }
            const double rise = s - run_min;
            if (rise > best.value) { best = {rise, run_arg, j}; }
        }
    }
    return best;
}

// Exhaustive search over grid pairs a = z_i (i in [0, N]), b in [a, a + window].
// window is given in grid steps. Used as the independent oracle route.
inline DrawdownScan window_drawdown(const CircleMap& m, bool falling, long window_steps) {
    const int n = m.grid_size();
    DrawdownScan best;
    for (long i = 0; i <= n; ++i) {
        const double si = m.sample_ext(i);
        for (long j = i; j <= i + window_steps; ++j) {
            const double diff = falling ? si - m.sample_ext(j) : m.sample_ext(j) - si;
            if (diff > best.value) { best = {diff, i, j}; }
        }
    }
    return best;
}

} // namespace detail

/// Maximal decrease of the lift over grid pairs a in [0, 2*pi], b in
/// [a, a + 2*pi] (mirrored to maximal increase for degree < 0), with the
/// maximizing pair. Grid semantics throughout: the value is the supremum of
/// the sampled lift differences. Throws ZeroDegree when degree(m) == 0.
inline std::pair<double, DrawdownWitness> max_drawdown(const CircleMap& m) {
    require(m.degree() != 0, ErrorCode::ZeroDegree, "drawdown window requires degree != 0");
    const bool falling = m.degree() > 0;
    const auto scan = detail::streaming_drawdown(m, falling);

    DrawdownWitness w;
    if (scan.value <= 0.0) {
        w = {m.node(0), m.node(0), 0.0};
        return {0.0, w};
    }
    const double h = m.step();
    double ta = h * double(falling ? scan.arg_hi : scan.arg_lo);
    double tb = h * double(falling ? scan.arg_lo : scan.arg_hi);
    // keep a in [0, 2*pi)
    while (ta >= kTwoPi) { ta -= kTwoPi; tb -= kTwoPi; }
    w = {ta, tb, scan.value};
    return {scan.value, w};
}

/// O(N^2) oracle over the one-period window; cross-checks the streaming scan.
inline double max_drawdown_window_oracle(const CircleMap& m) {
    require(m.degree() != 0, ErrorCode::ZeroDegree, "drawdown window requires degree != 0");
    return detail::window_drawdown(m, m.degree() > 0, m.grid_size()).value;
}

/// Brute force over the wide window b - a <= 3 periods; validates that the
/// one-period restriction loses nothing for |degree| >= 1.
inline double max_drawdown_wide_oracle(const CircleMap& m) {
    require(m.degree() != 0, ErrorCode::ZeroDegree, "drawdown window requires degree != 0");
    return detail::window_drawdown(m, m.degree() > 0, 3L * m.grid_size()).value;
}

/// Decide the conformally-Reeb criterion. Degree 0 is always rejected, with
/// a witness when the lift's range reaches pi. A measured drawdown within
/// decision_tol of pi is reported as Borderline rather than guessed.
inline ReebDecision decide(const CircleMap& m, double decision_tol = kDecisionTol) {
    ReebDecision dec;
    dec.degree = m.degree();

    if (m.degree() == 0) {
        dec.verdict = Verdict::NotReeb;
        dec.reason = "degree zero";
        // range of the periodic lift; any (max, min) pair can be ordered a < b
        const auto& s = m.samples();
        std::size_t imax = 0, imin = 0;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (s[j] > s[imax]) imax = j;
            if (s[j] < s[imin]) imin = j;
        }
        const double range = s[imax] - s[imin];
        dec.max_drawdown = range;
        dec.margin = kPi - range;
        if (range >= kPi) {
            double a = m.node(int(imax)), b = m.node(int(imin));
            if (b < a) b += kTwoPi;
            dec.witness = DrawdownWitness{a, b, range};
        }
        return dec;
    }

    const auto [dd, w] = max_drawdown(m);
    dec.max_drawdown = dd;
    dec.margin = kPi - dd;
    if (std::abs(dd - kPi) < decision_tol)
        fail(ErrorCode::Borderline, "drawdown " + std::to_string(dd) +
                                        " within decision tolerance of pi");
    if (dd < kPi - decision_tol) {
        dec.verdict = Verdict::ConformallyReeb;
    } else {
        dec.verdict = Verdict::NotReeb;
        dec.witness = w;
        dec.reason = "drawdown exceeds pi";
    }
    return dec;
}

} // namespace reeb3
