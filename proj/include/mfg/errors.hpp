#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfg {

enum class ErrorCode {
    NegativeThroughput,
    RateViolation,
    OutOfRange,
    NonFiniteState,
    NonPositiveGeometry,
    NegativePreference,
    InvalidDecision,
    MassOverflow,
    StepTooSmall,
    NoConvergedCandidate,
    InvalidArgument,
    ParseError,
    SchemaError,
    ValidationError,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// All library failures surface as this exception; `code()` names the violated rule.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace mfg
