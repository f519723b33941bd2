#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ratjac {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the function (x < 0, t >= 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A recurrence or closed form produced a non-finite value.
class NumericalOverflow : public Error {
public:
    using Error::Error;
};

/// An iterative root finder did not converge.
class RootFinderError : public Error {
public:
    RootFinderError(const std::string& what, std::size_t index)
        : Error(what), index_(index) {}
    [[nodiscard]] std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// The problem residual could not be evaluated at a point (non-finite value,
/// square root of a negative number, ...).
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, double node)
        : Error(what), node_(node) {}
    [[nodiscard]] double node() const noexcept { return node_; }

private:
    double node_;
};

/// The Newton matrix was singular or the linear solve produced garbage.
class StepFailure : public Error {
public:
    using Error::Error;
};

/// Invalid configuration: bad search space, unknown tag, missing field.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace ratjac
