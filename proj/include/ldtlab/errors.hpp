#pragma once

#include <stdexcept>
#include <string>

namespace ldtlab {

// Inputs that violate a documented precondition.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct NotPrime : PreconditionError {
    using PreconditionError::PreconditionError;
};

// An enumeration would exceed its configured work bound.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal consistency check failed (should not happen on valid inputs).
struct InconsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ldtlab
