#include "ldtk/error.hpp"

namespace ldtk {

const char* error_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NonIrreducible: return "NonIrreducible";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::IrreversibleTransition: return "IrreversibleTransition";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::QOutOfRange: return "QOutOfRange";
    case ErrorCode::NotMultiBath: return "NotMultiBath";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::IndexOrder: return "IndexOrder";
    case ErrorCode::OutsideConvergence: return "OutsideConvergence";
    case ErrorCode::UnknownModel: return "UnknownModel";
    case ErrorCode::RateOverflow: return "RateOverflow";
    case ErrorCode::ZeroTotalRate: return "ZeroTotalRate";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::SolverSingular: return "SolverSingular";
    case ErrorCode::BranchUnavailable: return "BranchUnavailable";
    case ErrorCode::QOutOfReach: return "QOutOfReach";
    case ErrorCode::NewtonDiverged: return "NewtonDiverged";
    case ErrorCode::NonMonotoneF: return "NonMonotoneF";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::PositiveArgument: return "PositiveArgument";
    case ErrorCode::LambdaTooNegative: return "LambdaTooNegative";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::OutputUnwritable: return "OutputUnwritable";
    }
    return "Unknown";
}

bool is_input_error(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NonIrreducible:
    case ErrorCode::NegativeRate:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::IrreversibleTransition:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::QOutOfRange:
    case ErrorCode::NotMultiBath:
    case ErrorCode::TooLarge:
    case ErrorCode::IndexOrder:
    case ErrorCode::OutsideConvergence:
    case ErrorCode::UnknownModel:
    case ErrorCode::InsufficientData:
    case ErrorCode::DomainViolation:
    case ErrorCode::BranchUnavailable:
    case ErrorCode::QOutOfReach:
    case ErrorCode::GridMismatch:
    case ErrorCode::PositiveArgument:
    case ErrorCode::LambdaTooNegative:
    case ErrorCode::ParseError:
    case ErrorCode::UnknownKey:
    case ErrorCode::MissingField:
    case ErrorCode::OutputUnwritable:
        return true;
    default:
        return false;
    }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code)
{
}

void fail(ErrorCode code, const std::string& message)
{
    throw Error(code, message);
}

}  // namespace ldtk
