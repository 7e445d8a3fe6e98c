#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netstab {

/// Base class for every error raised by the library. The CLI maps these to
/// exit status 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression or network text. `position` is a 0-based character
/// offset into the expression (or the line for file-level errors).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position, std::size_t line = 0)
        : Error(what), position_(position), line_(line) {}

    [[nodiscard]] std::size_t position() const noexcept { return position_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t position_;
    std::size_t line_;
};

/// Structurally valid input that violates a model constraint (undeclared
/// node, missing rule, incomplete structural set, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Point or interval evaluation failed (division by zero, missing variable).
class EvalError : public Error {
public:
    using Error::Error;
};

/// An interval bound came out infinite because a variable ranges over an
/// unbounded domain.
class UnboundedError : public Error {
public:
    using Error::Error;
};

/// An interval bound overflowed to infinity although every domain is bounded.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// An iterative method hit its iteration cap.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

} // namespace netstab
