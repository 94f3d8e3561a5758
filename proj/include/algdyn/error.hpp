#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace algdyn {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

/// Malformed or inconsistent user input (shape mismatch, violated precondition).
class InputError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "input"; }
};

/// Syntax error in a polynomial or matrix literal; carries the byte offset.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t position)
        : InputError(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }
    const char* kind() const noexcept override { return "parse"; }

private:
    std::size_t position_;
};

/// A configured memory or work budget would be exceeded.
class BudgetError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "budget"; }
};

/// An iterative refinement did not reach the requested precision.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }
    const char* kind() const noexcept override { return "convergence"; }

private:
    double achieved_;
};

/// Two independent computations of the same quantity disagree.
class ConsistencyError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "consistency"; }
};

} // namespace algdyn
