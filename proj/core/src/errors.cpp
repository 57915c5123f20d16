#include "gds/errors.hpp"

namespace gds {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroWeight: return "ZeroWeight";
        case ErrorCode::IndistinctPoints: return "IndistinctPoints";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotAMetric: return "NotAMetric";
        case ErrorCode::InvalidAlpha: return "InvalidAlpha";
        case ErrorCode::InvalidKappa: return "InvalidKappa";
        case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
        case ErrorCode::EmptySet: return "EmptySet";
        case ErrorCode::InvalidRange: return "InvalidRange";
        case ErrorCode::EmptyG: return "EmptyG";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::MarginalMismatch: return "MarginalMismatch";
        case ErrorCode::EmptySupport: return "EmptySupport";
        case ErrorCode::LevelMismatch: return "LevelMismatch";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::SchemaError: return "SchemaError";
    }
    return "Unknown";
}

bool is_validation_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotAMetric:
        case ErrorCode::MonotonicityViolation:
        case ErrorCode::MarginalMismatch:
        case ErrorCode::TooLarge:
            return false;
        default:
            return true;
    }
}

}  // namespace gds
