#pragma once

#include <stdexcept>
#include <string>

namespace fusible {

// Base class for all errors reported by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated precondition or undefined operation (division by zero,
// slope >= 1 fixed point, argument outside an interval, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Malformed textual input (rational strings, term s-expressions).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// A configurable work budget was exhausted.  The computation is total in
// principle; the budget turns astronomical cost into a reported error.
class ResourceError : public Error {
public:
    ResourceError(const std::string& msg, unsigned long long spent)
        : Error(msg), work_spent(spent) {}

    unsigned long long work_spent;
};

} // namespace fusible
