#pragma once

#include <stdexcept>
#include <string>

namespace uqbench {

/// Bad parameters or an unmet precondition. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Requested dimension exceeds what the embedded tables support.
class UnsupportedDimension : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A computation that cannot complete: non-finite integrand values,
/// factorizations that stay indefinite after nugget escalation.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reading or writing an artifact failed. The CLI maps this to exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace uqbench
