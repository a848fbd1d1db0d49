#pragma once

#include <functional>
#include <vector>

#include "linkcalc/errors.hpp"

namespace linkcalc::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-300; // pure relative control by default
    int max_evals = 100000;
};

using Fn = std::function<double(double)>;

// Adaptive Gauss-Kronrod 15(7) on [a,b].
double integrate(const Fn& f, double a, double b, const Options& opts = {});

// Adaptive integration on [0,inf). The tail panel uses x = last + t/(1-t).
// `breakpoints` are interior split locations (unsorted, duplicates fine);
// they seed the subdivision where the caller knows the integrand has scale
// changes. Non-finite or non-positive entries are ignored.
double integrate_semi_infinite(const Fn& f, std::vector<double> breakpoints,
                               const Options& opts = {});

// \int_0^upper x^(power-1) g(x) dx with 0 < power <= 1, g smooth at 0.
// Substitutes u = x^power so the endpoint singularity disappears.
double integrate_power_weighted(const Fn& g, double power, double upper,
                                const Options& opts = {});

} // namespace linkcalc::quad
