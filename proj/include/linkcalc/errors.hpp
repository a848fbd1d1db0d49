#pragma once

#include <stdexcept>
#include <string>

namespace linkcalc {

// Bad argument values (preconditions, parameter ranges).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A series or iteration failed to converge within its budget.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature could not reach the requested tolerance.
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two supposedly equivalent evaluation routes disagree.
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Meijer-G order (m,n,p,q) outside the implemented classes.
struct UnsupportedClassError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Root bracketing failed.
struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed config or data file. CLI maps this to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace linkcalc
