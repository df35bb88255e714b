#include "evalrank/error.hpp"

namespace evalrank {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ReferentialError: return "ReferentialError";
    case ErrorCode::TemporalError: return "TemporalError";
    case ErrorCode::DuplicateIntroducer: return "DuplicateIntroducer";
    case ErrorCode::ConstraintError: return "ConstraintError";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::MultipleRoots: return "MultipleRoots";
    case ErrorCode::InvalidRoot: return "InvalidRoot";
    case ErrorCode::DanglingParent: return "DanglingParent";
    case ErrorCode::LevelInversion: return "LevelInversion";
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownAchievement: return "UnknownAchievement";
    case ErrorCode::NotOriented: return "NotOriented";
    case ErrorCode::GraphCorpusMismatch: return "GraphCorpusMismatch";
    case ErrorCode::StepOutOfRange: return "StepOutOfRange";
    case ErrorCode::NonPositiveDim: return "NonPositiveDim";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::CoherenceError: return "CoherenceError";
    case ErrorCode::NoContributors: return "NoContributors";
    case ErrorCode::UnknownInstitution: return "UnknownInstitution";
    case ErrorCode::UndefinedDenominator: return "UndefinedDenominator";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace evalrank
