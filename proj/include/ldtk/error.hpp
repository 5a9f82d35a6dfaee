#pragma once

#include <stdexcept>
#include <string>

namespace ldtk {

enum class ErrorCode {
    NonIrreducible,
    NegativeRate,
    IndexOutOfRange,
    SingularSystem,
    IrreversibleTransition,
    DimensionMismatch,
    NoConvergence,
    QOutOfRange,
    NotMultiBath,
    TooLarge,
    IndexOrder,
    OutsideConvergence,
    UnknownModel,
    RateOverflow,
    ZeroTotalRate,
    InsufficientData,
    DomainViolation,
    SolverSingular,
    BranchUnavailable,
    QOutOfReach,
    NewtonDiverged,
    NonMonotoneF,
    GridMismatch,
    PositiveArgument,
    LambdaTooNegative,
    ParseError,
    UnknownKey,
    MissingField,
    OutputUnwritable,
};

const char* error_name(ErrorCode code);

// Input errors map to CLI exit code 1, everything else to 2.
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace ldtk
