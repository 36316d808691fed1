#include "cohphase/series.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace cohphase {

namespace {

constexpr double kGroundTol = 1e-14;   // |e_0| accepted as zero
constexpr double kLogMax = 709.78;     // ~ln(DBL_MAX)
const double kNegInf = -std::numeric_limits<double>::infinity();

void validate_policy(const TruncationPolicy& policy) {
    if (!(policy.tail_tol > 0.0 && policy.tail_tol < 1.0))
        throw Error(Errc::InvalidParameter, "tail_tol must lie in (0, 1)");
    if (policy.n_cap < 2)
        throw Error(Errc::InvalidParameter, "n_cap must be >= 2");
}

void check_ground_state(const StateSpec& spec) {
    const double e0 = spec.evaluator(0);
    if (!(std::abs(e0) <= kGroundTol))
        throw Error(Errc::SpectrumGroundNotZero,
                    "spectrum ground state e_0 = " + std::to_string(e0) + " must be 0", 0);
}

// One recurrence step of ln|d_n|; updates the running sign for nonlinearity kind.
double coefficient_step(const StateSpec& spec, int n, double log_mag_prev, int& sign) {
    if (spec.kind == SpecKind::Nonlinearity) {
        const double f = spec.evaluator(n);
        if (f == 0.0)
            throw Error(Errc::ZeroNonlinearity, "f(" + std::to_string(n) + ") = 0", n);
        if (!std::isfinite(f))
            throw Error(Errc::DomainError, "f(" + std::to_string(n) + ") is not finite", n);
        if (f < 0.0) sign = -sign;
        return log_mag_prev - 0.5 * std::log(static_cast<double>(n)) - std::log(std::abs(f));
    }
    const double e = spec.evaluator(n);
    if (!std::isfinite(e))
        throw Error(Errc::DomainError, "e_" + std::to_string(n) + " is not finite", n);
    if (!(e > 0.0))
        throw Error(Errc::NonpositiveSpectrum,
                    "e_" + std::to_string(n) + " = " + std::to_string(e) + " must be positive", n);
    return log_mag_prev - 0.5 * std::log(e);
}

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

void check_domain(const StateSpec& spec, double z_mag) {
    if (!(z_mag < spec.radius))
        throw Error(Errc::DomainExceeded,
                    "|z| = " + std::to_string(z_mag) + " outside convergence radius " +
                        std::to_string(spec.radius));
}

} // namespace

CoefficientTable build_coefficients(const StateSpec& spec, int n_max) {
    if (n_max < 0)
        throw Error(Errc::InvalidParameter, "n_max must be >= 0");
    if (!spec.evaluator)
        throw Error(Errc::InvalidParameter, "StateSpec has no evaluator");
    if (spec.kind == SpecKind::Spectrum) check_ground_state(spec);

    CoefficientTable table;
    table.log_mag.reserve(n_max + 1);
    table.sign.reserve(n_max + 1);
    table.log_mag.push_back(0.0);  // d_0 = 1
    table.sign.push_back(1);

    double lm = 0.0;
    int sg = 1;
    for (int n = 1; n <= n_max; ++n) {
        lm = coefficient_step(spec, n, lm, sg);
        table.log_mag.push_back(lm);
        table.sign.push_back(sg);
    }
    return table;
}

double log_normalization(const CoefficientTable& table, double z_mag2, int n_terms) {
    if (n_terms < 1 || n_terms > table.n_max() + 1)
        throw Error(Errc::InvalidParameter, "n_terms out of range for table");
    if (!(z_mag2 >= 0.0))
        throw Error(Errc::InvalidParameter, "z_mag2 must be nonnegative");

    if (z_mag2 == 0.0) return 2.0 * table.log_mag[0];

    const double lz = std::log(z_mag2);
    double peak = kNegInf;
    for (int n = 0; n < n_terms; ++n) {
        const double lt = 2.0 * table.log_mag[n] + n * lz;
        if (std::isnan(lt) || lt == std::numeric_limits<double>::infinity())
            throw Error(Errc::Overflow, "series term unrepresentable at n = " + std::to_string(n), n);
        peak = std::max(peak, lt);
    }
    double sum = 0.0;
    for (int n = 0; n < n_terms; ++n)
        sum += std::exp(2.0 * table.log_mag[n] + n * lz - peak);
    return peak + std::log(sum);
}

double normalization(const CoefficientTable& table, double z_mag2, int n_terms) {
    const double lg = log_normalization(table, z_mag2, n_terms);
    if (lg > kLogMax)
        throw Error(Errc::Overflow, "normalization sum exceeds double range");
    return std::exp(lg);
}

int choose_truncation(const StateSpec& spec, double z_mag, const TruncationPolicy& policy) {
    validate_policy(policy);
    if (!(z_mag >= 0.0))
        throw Error(Errc::InvalidParameter, "z_mag must be nonnegative");
    check_domain(spec, z_mag);
    if (spec.kind == SpecKind::Spectrum) check_ground_state(spec);

    const double ln_tol = std::log(policy.tail_tol);
    const double lz = z_mag > 0.0 ? std::log(z_mag) : kNegInf;

    double lm = 0.0;          // ln|d_n|
    int sg = 1;
    double log_sum = 0.0;     // ln of partial sum; term 0 is d_0^2 = 1
    int consecutive = 0;
    // Terms up to n_cap + 7 may be probed so that N itself never exceeds n_cap.
    for (int n = 1; n <= policy.n_cap + 7; ++n) {
        lm = coefficient_step(spec, n, lm, sg);
        const double lt = (z_mag > 0.0) ? 2.0 * (lm + n * lz) : kNegInf;
        if (lt < ln_tol + log_sum) {
            if (++consecutive == 8) return n - 7;
        } else {
            consecutive = 0;
        }
        log_sum = log_add(log_sum, lt);
    }
    throw Error(Errc::NotConverged,
                "series tail not below tail_tol within n_cap = " + std::to_string(policy.n_cap) +
                    " terms at |z| = " + std::to_string(z_mag));
}

std::function<double(int)> f_from_spectrum(std::function<double(int)> e) {
    return [e = std::move(e)](int n) {
        if (n < 1)
            throw Error(Errc::InvalidParameter, "nonlinearity function defined for n >= 1");
        const double en = e(n);
        if (en < 0.0)
            throw Error(Errc::NegativeSpectrum,
                        "e_" + std::to_string(n) + " = " + std::to_string(en) + " is negative", n);
        return std::sqrt(en / n);
    };
}

std::function<double(int)> spectrum_from_f(std::function<double(int)> f) {
    return [f = std::move(f)](int n) {
        if (n == 0) return 0.0;
        const double fn = f(n);
        return n * fn * fn;
    };
}

std::function<double(int)> nonlinearity_of(const StateSpec& spec) {
    if (spec.kind == SpecKind::Nonlinearity) return spec.evaluator;
    return f_from_spectrum(spec.evaluator);
}

std::vector<std::complex<double>> state_amplitudes(const StateSpec& spec, std::complex<double> z,
                                                   const TruncationPolicy& policy) {
    const double z_mag = std::abs(z);
    const int n_terms = choose_truncation(spec, z_mag, policy);
    const CoefficientTable table = build_coefficients(spec, n_terms - 1);
    const double half_log_norm = 0.5 * log_normalization(table, z_mag * z_mag, n_terms);
    const double phi = std::arg(z);

    std::vector<std::complex<double>> c(n_terms);
    c[0] = table.sign[0] * std::exp(table.log_mag[0] - half_log_norm);
    if (z_mag > 0.0) {
        const double lz = std::log(z_mag);
        for (int n = 1; n < n_terms; ++n) {
            const double mag = std::exp(table.log_mag[n] + n * lz - half_log_norm);
            c[n] = table.sign[n] * mag * std::polar(1.0, n * phi);
        }
    }
    return c;
}

double eigen_residual(const StateSpec& spec, std::complex<double> z,
                      const TruncationPolicy& policy) {
    const auto c = state_amplitudes(spec, z, policy);
    const auto f = nonlinearity_of(spec);
    double worst = 0.0;
    for (int n = 0; n + 1 < static_cast<int>(c.size()); ++n) {
        const double step = std::sqrt(n + 1.0) * f(n + 1);
        worst = std::max(worst, std::abs(step * c[n + 1] - z * c[n]));
    }
    return worst;
}

} // namespace cohphase
