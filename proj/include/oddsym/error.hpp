#pragma once

#include <stdexcept>
#include <string>

namespace oddsym {

/// What went wrong, machine-readably. Messages carry the details.
enum class ErrorKind {
    MismatchedContext,     // operands built over different generator counts / coordinate systems
    ZeroBody,              // inverse/sqrt of an element with vanishing numeric part
    NegativeBody,          // sqrt of an element with negative numeric part
    NonSquareBody,         // exact sqrt of a rational that is not a perfect square
    ParityViolation,       // even/odd bookkeeping broken (odd squared, bad substitution, ...)
    UnknownSymbol,
    ShapeMismatch,         // matrix dimensions or parity signatures incompatible
    SingularBody,          // matrix body not invertible
    NotNilpotent,          // symbolic inverse requested outside the unit-plus-nilpotent class
    DegenerateInducedForm,
    ValidationFailure,     // structure/chart/pair failed its load-time checks
    NonDarbouxChart,
    OffSurface,
    MissingAssignment,
    SyntaxError,
    InconsistentConstant,
    Unsupported,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace oddsym
