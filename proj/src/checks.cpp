#include "cohphase/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cohphase/phase.hpp"

namespace cohphase {

namespace {

constexpr int kGrid = 2001;

std::string deviation(double worst) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", worst);
    return std::string("worst deviation ") + buf;
}

std::vector<double> sample_magnitudes(const StateSpec& spec) {
    const double r = std::min(spec.radius, 3.0);
    return {0.3 * r, 0.6 * r, 0.9 * r};
}

double trapezoid(const std::vector<double>& thetas, const std::vector<double>& values) {
    double acc = 0.0;
    for (size_t i = 0; i + 1 < thetas.size(); ++i)
        acc += 0.5 * (values[i] + values[i + 1]) * (thetas[i + 1] - thetas[i]);
    return acc;
}

CheckResult check_amplitude_norm(const StateSpec& spec, const std::vector<double>& zs,
                                 const TruncationPolicy& policy) {
    double worst = 0.0;
    for (const double z : zs) {
        double sum = 0.0;
        for (const auto& c : state_amplitudes(spec, z, policy)) sum += std::norm(c);
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return {"amplitude-normalization", worst <= 1e-10, deviation(worst)};
}

CheckResult check_eigen_residual(const StateSpec& spec, const std::vector<double>& zs,
                                 const TruncationPolicy& policy) {
    double worst = 0.0;
    for (const double z : zs)
        worst = std::max(worst, eigen_residual(spec, z, policy) / std::max(1.0, z));
    return {"eigenvector-residual", worst <= 1e-9, deviation(worst)};
}

CheckResult check_dist_norm(const StateSpec& spec, const std::vector<double>& zs,
                            const TruncationPolicy& policy) {
    double worst = 0.0;
    for (const double z : zs) {
        const auto dist = phase_distribution(spec, z, kGrid, {}, policy);
        worst = std::max(worst, std::abs(trapezoid(dist.thetas, dist.values) - 1.0));
    }
    return {"distribution-normalization", worst <= 1e-8, deviation(worst)};
}

CheckResult check_symmetry(const StateSpec& spec, const std::vector<double>& zs,
                           const TruncationPolicy& policy) {
    double worst = 0.0;
    for (const double z : zs) {
        const auto dist = phase_distribution(spec, z, kGrid, {}, policy);
        const size_t size = dist.values.size();
        for (size_t i = 0; i < size; ++i)
            worst = std::max(worst, std::abs(dist.values[i] - dist.values[size - 1 - i]));
    }
    return {"symmetry-about-zero", worst <= 1e-12, deviation(worst)};
}

CheckResult check_uncertainty(const StateSpec& spec, const std::vector<double>& zs,
                              const TruncationPolicy& policy) {
    double worst = 0.0;  // most negative margin
    for (const double z : zs) {
        const auto rep = squeezing_report(spec, z, {}, policy);
        const double margin =
            rep.var_n * rep.var_phi - 0.25 * rep.commutator_mag * rep.commutator_mag;
        worst = std::min(worst, margin);
    }
    return {"uncertainty-product", worst >= -1e-9, deviation(worst)};
}

CheckResult check_dual_path(const StateSpec& spec, const std::vector<double>& zs,
                            const TruncationPolicy& policy) {
    const StateSpec via_f{SpecKind::Nonlinearity, f_from_spectrum(spec.evaluator), spec.radius,
                          spec.label + "|f-path"};
    double worst = 0.0;
    for (const double z : zs) {
        const auto de = phase_distribution(spec, z, kGrid, {}, policy);
        const auto df = phase_distribution(via_f, z, kGrid, {}, policy);
        for (size_t i = 0; i < de.values.size(); ++i)
            worst = std::max(worst, std::abs(de.values[i] - df.values[i]));
        const auto re = squeezing_report(spec, z, {}, policy);
        const auto rf = squeezing_report(via_f, z, {}, policy);
        worst = std::max(worst, std::abs(re.var_n - rf.var_n));
        worst = std::max(worst, std::abs(re.var_phi - rf.var_phi));
        if (re.s_n && rf.s_n) worst = std::max(worst, std::abs(*re.s_n - *rf.s_n));
        if (re.s_phi && rf.s_phi) worst = std::max(worst, std::abs(*re.s_phi - *rf.s_phi));
    }
    return {"spectrum-vs-nonlinearity", worst <= 1e-10, deviation(worst)};
}

} // namespace

std::vector<CheckResult> run_checks(const StateSpec& spec, const TruncationPolicy& policy) {
    const auto zs = sample_magnitudes(spec);
    std::vector<CheckResult> results;
    results.push_back(check_amplitude_norm(spec, zs, policy));
    results.push_back(check_eigen_residual(spec, zs, policy));
    results.push_back(check_dist_norm(spec, zs, policy));
    results.push_back(check_symmetry(spec, zs, policy));
    results.push_back(check_uncertainty(spec, zs, policy));
    if (spec.kind == SpecKind::Spectrum) results.push_back(check_dual_path(spec, zs, policy));
    return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.passed; });
}

} // namespace cohphase
