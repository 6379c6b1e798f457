// errors.hpp: exception hierarchy shared by every decoheat module

#pragma once

#include <stdexcept>
#include <string>

namespace decoheat {

// Base class for all library errors. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inputs violate a stated invariant (non-Hermitian operators, bad traces, bad configs).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation (negative beta, L < 3, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Level or site index out of range.
class IndexError : public Error {
public:
    using Error::Error;
};

// Many-body oracle asked to handle a bath larger than its configured cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Operation-specific precondition failed (e.g. non-commuting couplings for static noise).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Numerical-consistency failure: residues, bracket failures, unresolved inversions.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Floating-point range exceeded (overflow of exponentials at large imaginary counting fields).
class RangeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace decoheat
