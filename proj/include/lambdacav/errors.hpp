#pragma once

#include <stdexcept>
#include <string>

namespace lambdacav {

// Precondition / input problems. The CLI maps these to exit code 2.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Runtime numerical failures. The CLI maps these to exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NearDegenerateRoots : NumericalError {
    using NumericalError::NumericalError;
};

struct QuadratureNotConverged : NumericalError {
    using NumericalError::NumericalError;
};

struct NoConvergence : NumericalError {
    using NumericalError::NumericalError;
};

struct StepTooLarge : NumericalError {
    using NumericalError::NumericalError;
};

// BSM projection is undefined before any photon amplitude exists.
struct NoPhoton : NumericalError {
    using NumericalError::NumericalError;
};

struct NotHermitian : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct UndefinedRegime : InvalidInput {
    using InvalidInput::InvalidInput;
};

} // namespace lambdacav
