#pragma once

#include <stdexcept>
#include <string>

namespace molmom {

// Base for every error the library raises on bad input.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text or binary input. line is 1-based, 0 when not applicable.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Argument outside the domain of a numerical routine.
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace molmom
