#pragma once

#include <stdexcept>
#include <string>

namespace fracgreen {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Out-of-range scalar parameters (alpha, dimension, exponents).
struct ParameterError : Error {
    using Error::Error;
};

// A problem spec violates one of the model assumptions. The message names
// the violated assumption.
struct ValidationError : Error {
    using Error::Error;
};

// Grid unusable for the requested discretization (too coarse, wrong dim).
struct AssemblyError : Error {
    using Error::Error;
};

// Kernel evaluated too close to its singularity, or a measure fed to the
// wrong potential operator.
struct KernelError : Error {
    using Error::Error;
};

// Two independent computational routes for the same quantity disagree
// beyond the declared tolerance.
struct InconsistencyError : Error {
    using Error::Error;
};

// The smallness function has no root: the growth coefficient c is too
// large. Carries the largest admissible c found by scanning.
struct NoRootError : Error {
    NoRootError(const std::string& msg, double max_c)
        : Error(msg), max_admissible_c(max_c) {}
    double max_admissible_c;
};

struct NonConvergenceError : Error {
    using Error::Error;
};

// An iterate left the gradient-norm ball by more than the allowed slack.
struct BallEscapeError : Error {
    using Error::Error;
};

// Successive approximations stopped contracting.
struct DivergingSequenceError : Error {
    using Error::Error;
};

// Malformed input document; message carries a JSON-pointer-style path.
struct SchemaError : Error {
    using Error::Error;
};

} // namespace fracgreen
