#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaze360 {

// Stable error codes; the CLI maps each to a distinct exit status.
enum class ErrorCode {
    EmptyDetections = 1,
    UnknownTag,
    Underdetermined,
    Degenerate,
    AtInfinity,
    LowConfidence,
    ProjectionOutsideScreen,
    BadConfig,
    InvalidMap,
    ShapeMismatch,
    NotNormalized,
    ZeroVariance,
    NoFixations,
    EmptyGroundTruth,
    NotAProbability,
    OutOfBounds,
    UnknownTown,
    InsufficientHistory,
    MissingOutputs,
    ParseError,
    IoError,
    UsageError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace gaze360
