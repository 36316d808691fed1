#pragma once

#include <string>
#include <vector>

#include "cohphase/series.hpp"

namespace cohphase {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;  // worst deviation observed, for the report table
};

// Invariant suite behind `cohphase check`: amplitude normalization, the
// annihilation-eigenvector residual, distribution normalization and
// symmetry, the number-phase uncertainty product, and (for spectrum-built
// specs) agreement with the equivalent nonlinearity form.  Samples z at
// {0.3, 0.6, 0.9} * min(radius, 3).  Tolerance failures land in the results;
// evaluation errors propagate as exceptions.
std::vector<CheckResult> run_checks(const StateSpec& spec, const TruncationPolicy& policy = {});

bool all_passed(const std::vector<CheckResult>& results);

} // namespace cohphase
