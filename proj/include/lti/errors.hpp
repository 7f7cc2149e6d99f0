#pragma once

#include <stdexcept>
#include <string>

namespace lti {

// Quadrature failed to reach the requested accuracy, or a result is not finite.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A linear system could not be factorized even after a jitter retry.
struct IllConditionedError : NumericalError {
    using NumericalError::NumericalError;
};

// Malformed input file or kernel/config string.
struct ParseError : std::runtime_error {
    ParseError(const std::string& where, int line, const std::string& what)
        : std::runtime_error(where + ":" + std::to_string(line) + ": " + what),
          source(where), line_number(line) {}
    explicit ParseError(const std::string& what)
        : std::runtime_error(what), line_number(0) {}

    std::string source;
    int line_number;
};

}  // namespace lti
