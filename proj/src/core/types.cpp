#include "indef/types.hpp"

namespace indef {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Ok: return "Ok";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NonHermitianInput: return "NonHermitianInput";
        case ErrorCode::SingularS: return "SingularS";
        case ErrorCode::AmbiguousInertia: return "AmbiguousInertia";
        case ErrorCode::RankDeficientY: return "RankDeficientY";
        case ErrorCode::EvaluationFailure: return "EvaluationFailure";
        case ErrorCode::InconsistentConditions: return "InconsistentConditions";
        case ErrorCode::PoleHit: return "PoleHit";
        case ErrorCode::PoleProximity: return "PoleProximity";
        case ErrorCode::SingularPhat: return "SingularPhat";
        case ErrorCode::BoundaryPole: return "BoundaryPole";
        case ErrorCode::FramePole: return "FramePole";
        case ErrorCode::DenominatorSingular: return "DenominatorSingular";
        case ErrorCode::SolutionPole: return "SolutionPole";
        case ErrorCode::ResolventPole: return "ResolventPole";
        case ErrorCode::PoleInsideRadius: return "PoleInsideRadius";
        case ErrorCode::NonConvergent: return "NonConvergent";
        case ErrorCode::CoefficientMismatch: return "CoefficientMismatch";
        case ErrorCode::NonIntegrable: return "NonIntegrable";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::ParameterPole: return "ParameterPole";
        case ErrorCode::ZeroOnContour: return "ZeroOnContour";
        case ErrorCode::CountMismatch: return "CountMismatch";
        case ErrorCode::ConditioningBreakdown: return "ConditioningBreakdown";
        case ErrorCode::GenerationExhausted: return "GenerationExhausted";
        case ErrorCode::DegenerateParameter: return "DegenerateParameter";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace indef
