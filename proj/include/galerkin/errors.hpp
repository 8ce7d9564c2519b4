#pragma once

#include <stdexcept>
#include <string>

namespace galerkin {

enum class ErrorCode {
    EmptyTruncation,
    DivergentSum,
    DimensionMismatch,
    InvalidState,
    Domain,
    Overflow,
    StepRejected,
    Divergence,
    UndefinedEstimate,
    Infeasible,
    Precondition,
    Configuration,
    Io,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::EmptyTruncation: return "empty-truncation";
    case ErrorCode::DivergentSum: return "divergent-sum";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::InvalidState: return "invalid-state";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::StepRejected: return "step-rejected";
    case ErrorCode::Divergence: return "divergence";
    case ErrorCode::UndefinedEstimate: return "undefined-estimate";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::Configuration: return "configuration";
    case ErrorCode::Io: return "io";
    }
    return "unknown";
}

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace galerkin
