#pragma once

#include <stdexcept>
#include <string>

namespace sgmine {

// Malformed input text (log files, XES, model JSON).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// A precondition on values was violated (empty log, unknown state, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (singular system beyond tolerance).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// A configured resource bound was exceeded (execution enumeration).
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace sgmine
