#include "mfg/errors.hpp"

namespace mfg {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NegativeThroughput: return "NegativeThroughput";
        case ErrorCode::RateViolation: return "RateViolation";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::NonPositiveGeometry: return "NonPositiveGeometry";
        case ErrorCode::NegativePreference: return "NegativePreference";
        case ErrorCode::InvalidDecision: return "InvalidDecision";
        case ErrorCode::MassOverflow: return "MassOverflow";
        case ErrorCode::StepTooSmall: return "StepTooSmall";
        case ErrorCode::NoConvergedCandidate: return "NoConvergedCandidate";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace mfg
