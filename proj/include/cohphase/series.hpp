#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "cohphase/errors.hpp"

namespace cohphase {

enum class SpecKind { Nonlinearity, Spectrum };

// A generalized coherent-state family.  The family is given either by its
// nonlinearity function f(n), defined for n >= 1, or by the discrete spectrum
// e_n of the normal-ordered Hamiltonian, defined for n >= 0 with e_0 = 0.
// The two are related by f(n) = sqrt(e_n / n).
struct StateSpec {
    SpecKind kind = SpecKind::Nonlinearity;
    std::function<double(int)> evaluator;
    // Radius of convergence of the normalization series in |z|.
    double radius = std::numeric_limits<double>::infinity();
    std::string label;
};

// Controls truncation of the (formally infinite) expansion series.
struct TruncationPolicy {
    double tail_tol = 1e-12;  // relative tail bound on the normalization series
    int n_cap = 512;          // hard maximum number of terms
};

// Expansion coefficients d_n = [sqrt(n!) prod f(i)]^{-1} stored as
// ln|d_n| plus sign, with d_0 = 1.  Signs are all +1 for spectrum-built
// tables (e_n > 0 implies d_n = 1/sqrt([e_n]!) > 0).
struct CoefficientTable {
    std::vector<double> log_mag;
    std::vector<int> sign;

    int n_max() const noexcept { return static_cast<int>(log_mag.size()) - 1; }
    double coefficient(int n) const { return sign[n] * std::exp(log_mag[n]); }
};

CoefficientTable build_coefficients(const StateSpec& spec, int n_max);

// ln of the truncated normalization sum  Sum_{n < n_terms} d_n^2 z_mag2^n.
// Computed by log-domain rescaling; never overflows for finite inputs.
double log_normalization(const CoefficientTable& table, double z_mag2, int n_terms);

// The normalization sum itself; throws Overflow when it exceeds double range.
double normalization(const CoefficientTable& table, double z_mag2, int n_terms);

// Smallest term count N such that the next 8 consecutive terms of the
// normalization series at |z| = z_mag each fall below tail_tol times the
// running partial sum.  Throws NotConverged when n_cap is exhausted.
int choose_truncation(const StateSpec& spec, double z_mag, const TruncationPolicy& policy);

// f(n) = sqrt(e_n / n), defined for n >= 1.
std::function<double(int)> f_from_spectrum(std::function<double(int)> e);

// e_n = n f(n)^2, with e_0 = 0 by construction.
std::function<double(int)> spectrum_from_f(std::function<double(int)> f);

// View any spec through its nonlinearity function regardless of kind.
std::function<double(int)> nonlinearity_of(const StateSpec& spec);

// Normalized amplitudes c_n = N^{-1/2} d_n z^n for n = 0 .. N-1.
std::vector<std::complex<double>> state_amplitudes(const StateSpec& spec, std::complex<double> z,
                                                   const TruncationPolicy& policy = {});

// Component-wise residual of the annihilation eigenvalue equation:
// max_n |sqrt(n+1) f(n+1) c_{n+1} - z c_n|.
double eigen_residual(const StateSpec& spec, std::complex<double> z,
                      const TruncationPolicy& policy = {});

} // namespace cohphase
