#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace heatadapt {

enum class ErrorCode {
    CflViolation,
    NonPositiveGain,
    ZeroCoefficient,
    SignMismatch,
    InvalidGrid,
    InvalidConfig,
    GridMismatch,
    NonFiniteState,
    TruncationInsufficient,
    InsufficientDuration,
    UnresolvableMode,
    Io,
    Usage,
};

[[nodiscard]] constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::CflViolation: return "CflViolation";
        case ErrorCode::NonPositiveGain: return "NonPositiveGain";
        case ErrorCode::ZeroCoefficient: return "ZeroCoefficient";
        case ErrorCode::SignMismatch: return "SignMismatch";
        case ErrorCode::InvalidGrid: return "InvalidGrid";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::TruncationInsufficient: return "TruncationInsufficient";
        case ErrorCode::InsufficientDuration: return "InsufficientDuration";
        case ErrorCode::UnresolvableMode: return "UnresolvableMode";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Usage: return "Usage";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace heatadapt
