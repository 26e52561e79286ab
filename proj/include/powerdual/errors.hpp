#pragma once

#include <stdexcept>
#include <string>

namespace powerdual {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Structurally invalid argument (wrong ordering, wrong sizes, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Gamma evaluated at a non-positive integer.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// An iterative method exhausted its budget.
class NonConvergenceError : public Error {
public:
    using Error::Error;
};

/// Root bracketing failed.
class BracketError : public Error {
public:
    using Error::Error;
};

/// The requested bound state does not exist.
class NoBoundStateError : public Error {
public:
    using Error::Error;
};

/// p^2 = eps - V_eff is nowhere positive.
class NoClassicalRegionError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Mapped samples fall outside the grid of the solution they are compared with.
class GridCoverageError : public Error {
public:
    using Error::Error;
};

class OrthonormalityError : public Error {
public:
    using Error::Error;
};

class InsufficientStatesError : public Error {
public:
    using Error::Error;
};

class FitQualityError : public Error {
public:
    using Error::Error;
};

}  // namespace powerdual
