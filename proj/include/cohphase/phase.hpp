#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "cohphase/series.hpp"

namespace cohphase {

inline constexpr double kPi = 3.14159265358979323846;

// The 2*pi-wide window [theta0, theta0 + 2*pi) that phase angles live on.
struct PhaseWindow {
    double theta0 = -kPi;
};

struct PhaseDistribution {
    PhaseWindow window;
    std::vector<double> thetas;
    std::vector<double> values;
    std::complex<double> z;
    std::string spec_label;
};

struct SqueezingReport {
    std::complex<double> z;
    double var_n = 0.0;
    double var_phi = 0.0;
    double commutator_mag = 0.0;
    // Absent (not +-inf) when the commutator expectation vanishes, which
    // happens at z = 0 where the distribution is uniform.
    std::optional<double> s_n;
    std::optional<double> s_phi;
};

enum class SqueezeParam { Sn, Sphi };

// Samples the closed-form phase distribution on a uniform grid of grid_size
// points covering the window endpoints inclusive (the last point is the
// periodic image of the first).  An odd grid_size with the default window
// puts theta = 0 exactly on the grid.
PhaseDistribution phase_distribution(const StateSpec& spec, std::complex<double> z, int grid_size,
                                     PhaseWindow window = {}, const TruncationPolicy& policy = {});

// Variance of the phase about its mean, computed in closed form for the
// state rotated to real positive z (the rotation only shifts the mean; see
// mean_phase).  Equals pi^2/3 at z = 0.
double phase_variance(const StateSpec& spec, std::complex<double> z,
                      const TruncationPolicy& policy = {});

// <n^2> - <n>^2 of the number distribution.
double number_variance(const StateSpec& spec, std::complex<double> z,
                       const TruncationPolicy& policy = {});

// 1 - 2*pi*P(theta0): the real factor whose magnitude is |<[n, phi]>|.
double commutator_expectation(const StateSpec& spec, std::complex<double> z,
                              PhaseWindow window = {}, const TruncationPolicy& policy = {});

// Assembles variances, commutator magnitude and both squeezing parameters
// S = 2*Var/|<[n,phi]>| - 1 for the state rotated to real |z|.  S fields are
// absent when the commutator magnitude falls below 1e-12.
SqueezingReport squeezing_report(const StateSpec& spec, std::complex<double> z,
                                 PhaseWindow window = {}, const TruncationPolicy& policy = {});

// Scans S_n or S_phi over [z_lo, z_hi] with the given step, then bisects
// every sign-changing bracket down to a width of 1e-4.  Returns the roots in
// ascending order; empty when the sign never changes.
std::vector<double> crossover_scan(const StateSpec& spec, SqueezeParam which, double z_lo,
                                   double z_hi, double step, PhaseWindow window = {},
                                   const TruncationPolicy& policy = {});

// Mean phase of the state: the argument of z (the rotated state's first
// moment about the window center vanishes by symmetry).
double mean_phase(const StateSpec& spec, std::complex<double> z,
                  const TruncationPolicy& policy = {});

} // namespace cohphase
