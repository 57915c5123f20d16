#pragma once

#include <stdexcept>
#include <string>

namespace gds {

enum class ErrorCode {
    ZeroWeight,
    IndistinctPoints,
    DimensionMismatch,
    NotAMetric,
    InvalidAlpha,
    InvalidKappa,
    MonotonicityViolation,
    EmptySet,
    InvalidRange,
    EmptyG,
    InvalidSpec,
    MarginalMismatch,
    EmptySupport,
    LevelMismatch,
    TooLarge,
    SchemaError,
};

const char* error_name(ErrorCode code);

// True for errors caused by malformed or invalid input (CLI exit code 2);
// the rest are computational failures (exit code 3).
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gds
