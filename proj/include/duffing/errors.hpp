// Error hierarchy shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace duffing {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid parameters, malformed configs, violated call contracts.
struct ConfigError : Error {
    using Error::Error;
};

// Integration, quadrature or root-finding failures.
struct NumericalError : Error {
    using Error::Error;
};

// Root bracketing failed (level below admissible floor, unbounded level set, ...).
struct BracketError : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace duffing
