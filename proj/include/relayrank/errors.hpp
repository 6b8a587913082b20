#pragma once

#include <stdexcept>
#include <string>

namespace relayrank {

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

/// A fit was requested on data that cannot identify the model
/// (too few points, zero variance).
class DegenerateFitError : public Error {
public:
    using Error::Error;
};

/// Duplicate places in a training sample.
class TieError : public Error {
public:
    using Error::Error;
};

/// Least-squares design matrix is singular (all inputs identical).
class SingularFitError : public Error {
public:
    using Error::Error;
};

/// Kernel matrix could not be factorized.
class IllConditionedError : public Error {
public:
    IllConditionedError(const std::string& what, double min_eigenvalue)
        : Error(what), min_eigenvalue_(min_eigenvalue) {}

    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

/// Malformed input file. Line is 1-based, 0 when not applicable.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid train/test split specification.
class SpecError : public Error {
public:
    using Error::Error;
};

}  // namespace relayrank
