#include "scherk/error.hpp"

namespace scherk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::StepCountTooSmall: return "StepCountTooSmall";
    case ErrorCode::InvalidForModel: return "InvalidForModel";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::AExceedsBound: return "AExceedsBound";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::InvalidPreset: return "InvalidPreset";
    case ErrorCode::MeshFailure: return "MeshFailure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::PinchDetected: return "PinchDetected";
    case ErrorCode::WeldFailure: return "WeldFailure";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace scherk
