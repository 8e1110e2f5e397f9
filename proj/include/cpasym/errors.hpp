// errors.hpp — Exception taxonomy shared by all modules.

#pragma once

#include <stdexcept>

namespace cpasym {

// Shape or layout violation: mismatched block structures, bad matrix sizes.
struct StructuralError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input outside an operation's mathematical domain.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Backend failure or ill-conditioned computation.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Defective eigenstructure where semisimplicity is required.
struct SemisimplicityError : NumericalError {
    using NumericalError::NumericalError;
};

// An eigenvalue lies strictly outside the closed unit disc.
struct ContractionViolationError : NumericalError {
    using NumericalError::NumericalError;
};

// Scan budget exhausted before a witness was found.
struct SearchExhaustedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iteration budget exhausted before the residual target was met.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation requires an irreducible stochastic matrix.
struct ReducibilityError : DomainError {
    using DomainError::DomainError;
};

// A closure or consistency check failed at the configured tolerance,
// signaling tolerance misconfiguration rather than bad data.
struct ToleranceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cpasym
