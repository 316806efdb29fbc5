#pragma once

#include <stdexcept>
#include <string>

namespace qexp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// Raised when a dense path would exceed the configured size cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Input text could not be parsed. line/column are 1-based; 0 means unknown.
class ParseError : public Error {
public:
    ParseError(const std::string &message, std::size_t line = 0, std::size_t column = 0)
        : Error(line ? message + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"
                     : message),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace qexp
