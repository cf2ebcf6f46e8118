#pragma once

#include <stdexcept>
#include <string>

namespace reeb3 {

enum class ErrorCode {
    AmbiguousLift,
    DegreeMismatch,
    DegenerateCritical,
    ZeroDegree,
    Borderline,
    InfeasibleIntervals,
    TubeViolation,
    MaxBias,
    NotEquivariant,
    TanOverflow,
    BadBracket,
    NoConvergence,
    CriterionFailed,
    PreconditionFailed,
    EpsilonTooLarge,
    AnchorViolation,
    ZeroFrequency,
    ParseError,
    NonIntegerDegree,
    NonPeriodic,
    InternalCheck,
    InvalidInput,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::AmbiguousLift: return "AmbiguousLift";
        case ErrorCode::DegreeMismatch: return "DegreeMismatch";
        case ErrorCode::DegenerateCritical: return "DegenerateCritical";
        case ErrorCode::ZeroDegree: return "ZeroDegree";
        case ErrorCode::Borderline: return "Borderline";
        case ErrorCode::InfeasibleIntervals: return "InfeasibleIntervals";
        case ErrorCode::TubeViolation: return "TubeViolation";
        case ErrorCode::MaxBias: return "MaxBias";
        case ErrorCode::NotEquivariant: return "NotEquivariant";
        case ErrorCode::TanOverflow: return "TanOverflow";
        case ErrorCode::BadBracket: return "BadBracket";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::CriterionFailed: return "CriterionFailed";
        case ErrorCode::PreconditionFailed: return "PreconditionFailed";
        case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
        case ErrorCode::AnchorViolation: return "AnchorViolation";
        case ErrorCode::ZeroFrequency: return "ZeroFrequency";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::NonIntegerDegree: return "NonIntegerDegree";
        case ErrorCode::NonPeriodic: return "NonPeriodic";
        case ErrorCode::InternalCheck: return "InternalCheck";
        case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

/// Library-wide exception. `code()` identifies the failure class so callers
/// (and tests) can dispatch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
    if (!condition) fail(code, message);
}

} // namespace reeb3
