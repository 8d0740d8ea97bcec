#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geovec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input. Carries the 1-based line number when one is known (0 otherwise).
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input that is well formed but cannot be processed (empty index, zero area, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

}  // namespace geovec
