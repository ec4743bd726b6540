#pragma once

#include <stdexcept>
#include <string>

namespace dha {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A requested feature is finer than the grid can resolve.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// An interval endpoint does not sit on a cell boundary.
class AlignmentError : public Error {
public:
    using Error::Error;
};

/// A scale, position or support falls outside the configured window.
class RangeError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// An operator failed a contract spot check (e.g. linearity).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Malformed JSON or command-line input.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A decomposition was requested in a space the function does not belong to.
/// The obstruction is the half-line integral that blocks it.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, double obstruction)
        : Error(what), obstruction_(obstruction) {}

    double obstruction() const noexcept { return obstruction_; }

private:
    double obstruction_;
};

}  // namespace dha
