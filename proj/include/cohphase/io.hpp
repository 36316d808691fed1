#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cohphase/phase.hpp"

namespace cohphase {

// Shortest decimal string that parses back to exactly the same double
// (locale-free, '.' separator).  Used everywhere a double reaches an
// artifact so that identical inputs produce identical bytes.
std::string format_double(double value);

// One squeeze-sweep output row.  Absent fields render as empty CSV cells /
// JSON nulls: S at the degenerate commutator, or a whole row whose point
// evaluation failed recoverably.
struct SqueezeRow {
    double z = 0.0;
    std::optional<double> var_n;
    std::optional<double> var_phi;
    std::optional<double> commutator;
    std::optional<double> s_n;
    std::optional<double> s_phi;
};

// Header `theta,P` for a single distribution, `theta,P_z<mag>,...` for
// several distributions sharing one theta grid.
std::string dist_csv(const std::vector<PhaseDistribution>& dists);

// Header `z,var_n,var_phi,commutator,S_n,S_phi`.
std::string squeeze_csv(const std::vector<SqueezeRow>& rows);

std::string dist_json(const std::vector<PhaseDistribution>& dists);

std::string squeeze_json(const std::vector<SqueezeRow>& rows);

struct CrossoverResult {
    std::string system;
    std::map<std::string, double> params;
    SqueezeParam which = SqueezeParam::Sn;
    std::vector<double> roots;
    double tol = 1e-4;
};

std::string crossover_json(const CrossoverResult& result);

} // namespace cohphase
