#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dynpress {

enum class ErrorCode {
    InvalidInput,
    AmplitudeOutOfRange,
    AmplitudeCapExceeded,
    FroudeSubcritical,
    InputConflict,
    NoConvergence,
    OutOfDomain,
    GridTooCoarse,
    StepTooLarge,
    DenominatorVanishing,
    TraceTooShort,
    InputFormat,
    Precondition,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable error category.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::AmplitudeOutOfRange: return "AmplitudeOutOfRange";
    case ErrorCode::AmplitudeCapExceeded: return "AmplitudeCapExceeded";
    case ErrorCode::FroudeSubcritical: return "FroudeSubcritical";
    case ErrorCode::InputConflict: return "InputConflict";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::DenominatorVanishing: return "DenominatorVanishing";
    case ErrorCode::TraceTooShort: return "TraceTooShort";
    case ErrorCode::InputFormat: return "InputFormat";
    case ErrorCode::Precondition: return "Precondition";
    }
    return "Unknown";
}

} // namespace dynpress
