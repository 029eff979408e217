#include "moebiuslab/errors.hpp"

namespace moebiuslab {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::PointOutsideDomain: return "PointOutsideDomain";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::UmbilicPoint: return "UmbilicPoint";
        case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
        case ErrorCode::IndeterminateSpectrum: return "IndeterminateSpectrum";
        case ErrorCode::NonRealMu: return "NonRealMu";
        case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
        case ErrorCode::SurfaceModelMismatch: return "SurfaceModelMismatch";
        case ErrorCode::IntegratorStepTooLarge: return "IntegratorStepTooLarge";
        case ErrorCode::UnknownCatalogEntry: return "UnknownCatalogEntry";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::InvalidSpecFile: return "InvalidSpecFile";
    }
    return "Unknown";
}

}  // namespace moebiuslab
