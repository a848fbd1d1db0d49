#pragma once

#include "linkcalc/errors.hpp"

namespace linkcalc {

// Numerical evaluation policy shared by the special-function kernel and the
// quadrature routines.
struct EvalPolicy {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_terms = 5000;
    double pole_perturbation = 1e-6;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(pole_perturbation > 0.0))
            throw DomainError("EvalPolicy: tolerances must be strictly positive");
        if (max_terms < 1)
            throw DomainError("EvalPolicy: max_terms must be >= 1");
    }
};

} // namespace linkcalc
