#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cohphase/phase.hpp"

namespace cohphase {

// Which state family a run uses: a catalog entry (by stable key) or an
// inline expression.  `expr` nonempty selects the expression form.
struct SystemRef {
    std::string catalog_key;
    std::string expr;
    SpecKind kind = SpecKind::Nonlinearity;
    std::map<std::string, double> params;
    std::optional<double> radius;  // expression systems only; default unbounded
};

struct ZSelection {
    bool sweep = false;
    // single point
    double mag = 0.0;
    double phase = 0.0;
    // sweep over magnitudes
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
};

enum class OutputFormat { Csv, Json };

struct RunConfig {
    SystemRef system;
    ZSelection z;
    int theta_grid = 2001;
    double window_theta0 = -kPi;
    double tail_tol = 1e-12;
    int n_cap = 512;
    std::string output_path;  // empty writes to stdout
    OutputFormat format = OutputFormat::Csv;
};

// Parses the JSON mirror of RunConfig (same field names, snake_case).
// Unknown keys, missing required fields, and malformed values raise
// ConfigError.
RunConfig load_config(const std::string& json_text);

// Structural validation independent of the system: grid size, tolerances,
// z selection shape.  Raises ConfigError.
void validate(const RunConfig& config);

// Sweep bounds against the realized system's convergence radius: a sweep
// must stay strictly inside it.  (A single z outside the radius is left to
// evaluation, which reports DomainExceeded.)
void validate_sweep_domain(const RunConfig& config, const StateSpec& spec);

// Builds the StateSpec a SystemRef names; catalog advisories (e.g. a
// non-half-integer kappa) are appended to `warnings` when provided.
StateSpec realize_system(const SystemRef& ref, std::vector<std::string>* warnings = nullptr);

} // namespace cohphase
