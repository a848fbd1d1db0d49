#pragma once

#include <cstdint>
#include <string>

#include "linkcalc/scenario.hpp"

namespace linkcalc {

struct ValidateOptions {
    std::int64_t mc_samples = 1'000'000;
    std::uint64_t seed = 42;
    int workers = 1;
    double ks_tol = 0.005;
};

struct ValidateOutcome {
    std::string report; // one PASS/FAIL line per check plus a summary line
    bool ok = false;
    int passed = 0;
    int total = 0;
};

// The full analytic-vs-Monte-Carlo consistency battery. The report text is a
// pure function of (scenario, mc_samples, seed, ks_tol): worker count only
// changes timing.
ValidateOutcome run_validation(const Scenario& sc, const ValidateOptions& opts);

} // namespace linkcalc
