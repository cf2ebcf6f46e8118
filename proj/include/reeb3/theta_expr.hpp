#pragma once

#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "reeb3/circle_map.hpp"
#include "reeb3/errors.hpp"

namespace reeb3 {

/// Parsed angle profile m*z + sum_i c_i * trig(k_i * z + p_i). The linear
/// coefficient must be an integer (it is the winding degree); harmonics are
/// 2*pi-periodic by construction.
struct Harmonic {
    double amplitude = 0.0;
    int frequency = 1;
    double phase = 0.0;
    bool is_cos = false;
};

struct ThetaExpr {
    int degree = 0;
    double constant = 0.0;
    std::vector<Harmonic> harmonics;

    double operator()(double z) const {
        double v = double(degree) * z + constant;
        for (const auto& h : harmonics) {
            const double arg = double(h.frequency) * z + h.phase;
            v += h.amplitude * (h.is_cos ? std::cos(arg) : std::sin(arg));
        }
        return v;
    }

    CircleMap sample(int grid_n) const {
        return CircleMap::from_lift([this](double z) { return (*this)(z); }, grid_n);
    }
};

namespace detail {

class ExprParser {
public:
    explicit ExprParser(const std::string& src) : s_(src) {}

    ThetaExpr parse() {
        ThetaExpr e;
        skip_ws();
        double sign = 1.0;
        if (peek() == '+' || peek() == '-') sign = (get() == '-') ? -1.0 : 1.0;
        parse_term(e, sign);
        skip_ws();
        while (pos_ < s_.size()) {
            const char op = get();
            if (op != '+' && op != '-')
                fail_at("expected '+' or '-'");
            parse_term(e, op == '-' ? -1.0 : 1.0);
            skip_ws();
        }
        return e;
    }

private:
    void parse_term(ThetaExpr& e, double sign) {
        skip_ws();
        if (pos_ >= s_.size()) fail_at("expected a term");
        double coeff = 1.0;
        bool have_number = false;
        std::size_t coeff_pos = pos_;
        if (std::isdigit(peek()) || peek() == '.') {
            coeff = parse_number();
            have_number = true;
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                skip_ws();
            } else if (pos_ >= s_.size() || peek() == '+' || peek() == '-') {
                e.constant += sign * coeff; // bare number term
                return;
            }
        }
        if (peek() == 'z') {
            ++pos_;
            check_no_power();
            if (have_number) {
                const double d = sign * coeff;
                if (std::abs(d - std::round(d)) > 1e-12)
                    fail(ErrorCode::NonIntegerDegree,
                         "coefficient of z must be an integer, got " + s_.substr(coeff_pos, 8));
                e.degree += int(std::round(d));
            } else {
                e.degree += int(std::round(sign));
            }
            return;
        }
        if (match("sin") || match("cos")) {
            const bool is_cos = s_[pos_ - 3] == 'c';
            skip_ws();
            if (pos_ >= s_.size() || get() != '(') fail_at("expected '(' after sin/cos");
            Harmonic h;
            h.is_cos = is_cos;
            h.amplitude = sign * coeff;
            skip_ws();
            if (std::isdigit(peek()) || peek() == '.') {
                const std::size_t fp = pos_;
                const double f = parse_number();
                if (std::abs(f - std::round(f)) > 1e-12 || f <= 0.0)
                    fail(ErrorCode::ParseError,
                         "harmonic frequency must be a positive integer at position " +
                             std::to_string(fp));
                h.frequency = int(std::round(f));
                skip_ws();
                if (peek() == '*') {
                    ++pos_;
                    skip_ws();
                }
            }
            if (pos_ >= s_.size() || get() != 'z') fail_at("expected 'z' inside sin/cos");
            check_no_power();
            skip_ws();
            if (peek() == '+' || peek() == '-') {
                const double psign = (get() == '-') ? -1.0 : 1.0;
                skip_ws();
                h.phase = psign * parse_number();
                skip_ws();
            }
            if (pos_ >= s_.size() || get() != ')') fail_at("expected ')'");
            e.harmonics.push_back(h);
            return;
        }
        fail_at("unrecognized term");
    }

    void check_no_power() {
        if (pos_ < s_.size() && s_[pos_] == '^')
            fail(ErrorCode::NonPeriodic, "powers of z are not 2*pi-periodic (position " +
                                             std::to_string(pos_) + ")");
    }

    bool match(const char* kw) {
        const std::size_t len = std::char_traits<char>::length(kw);
        if (s_.compare(pos_, len, kw) == 0) {
            pos_ += len;
            return true;
        }
        return false;
    }

    double parse_number() {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s_.substr(pos_), &used);
        } catch (...) {
            fail_at("expected a number");
        }
        pos_ += used;
        return v;
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char get() { return s_[pos_++]; }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail_at(const std::string& what) {
        fail(ErrorCode::ParseError, what + " at position " + std::to_string(pos_) + " in \"" +
                                        s_ + "\"");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline ThetaExpr parse_theta(const std::string& src) {
    require(!src.empty(), ErrorCode::ParseError, "empty expression");
    return detail::ExprParser(src).parse();
}

} // namespace reeb3
