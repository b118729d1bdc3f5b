#include "gaze360/error.hpp"

namespace gaze360 {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyDetections: return "EmptyDetections";
        case ErrorCode::UnknownTag: return "UnknownTag";
        case ErrorCode::Underdetermined: return "Underdetermined";
        case ErrorCode::Degenerate: return "Degenerate";
        case ErrorCode::AtInfinity: return "AtInfinity";
        case ErrorCode::LowConfidence: return "LowConfidence";
        case ErrorCode::ProjectionOutsideScreen: return "ProjectionOutsideScreen";
        case ErrorCode::BadConfig: return "BadConfig";
        case ErrorCode::InvalidMap: return "InvalidMap";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::NoFixations: return "NoFixations";
        case ErrorCode::EmptyGroundTruth: return "EmptyGroundTruth";
        case ErrorCode::NotAProbability: return "NotAProbability";
        case ErrorCode::OutOfBounds: return "OutOfBounds";
        case ErrorCode::UnknownTown: return "UnknownTown";
        case ErrorCode::InsufficientHistory: return "InsufficientHistory";
        case ErrorCode::MissingOutputs: return "MissingOutputs";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::UsageError: return "UsageError";
    }
    return "Unknown";
}

}  // namespace gaze360
