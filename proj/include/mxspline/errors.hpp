#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mxspline {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Incompatible operand shapes.
struct DimensionError : Error {
    using Error::Error;
};

// A linear system was singular to working precision.
struct SingularMatrixError : Error {
    using Error::Error;
};

// An iterative scheme ran out of iterations (power iteration).
struct IterationLimitError : Error {
    using Error::Error;
};

// Fixed-point iteration did not meet its tolerance; carries the last
// residual and, when known, the segment being solved.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double residual, int segment = -1)
        : Error(what), residual(residual), segment(segment) {}
    double residual = 0.0;
    int segment = -1;
};

// Argument outside the domain of an operation (spline eval out of range,
// log of a non-positive value, ...).
struct DomainError : Error {
    using Error::Error;
};

// Expression or document syntax error; offset is a byte position into the
// offending source text.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t offset)
        : Error(what), offset(offset) {}
    std::size_t offset = 0;
};

// Invalid run configuration (CLI flags or config document).
struct ConfigError : Error {
    using Error::Error;
};

// Step size fails the contraction requirement h*L/3 < 1.
struct StepConditionError : Error {
    using Error::Error;
};

// A delta for which the solution-bound denominator is not positive.
struct InadmissibleDeltaError : Error {
    using Error::Error;
};

}  // namespace mxspline
