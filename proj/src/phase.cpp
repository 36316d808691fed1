#include "cohphase/phase.hpp"

#include <algorithm>
#include <cmath>

namespace cohphase {

namespace {

// Shared precomputation: scaled signed weights w_n ~ d_n |z|^n (rescaled by
// the series peak so squares never overflow), their square sum, and the
// cross-correlation sums C_m = sum_k w_{k+m} w_k that every closed form
// below is built from.
struct Context {
    int n_terms = 0;
    std::vector<double> w;
    double norm = 0.0;          // sum of w_n^2
    std::vector<double> cross;  // cross[m] = C_m for m >= 1; cross[0] unused
};

Context prepare(const StateSpec& spec, double z_mag, const TruncationPolicy& policy) {
    Context ctx;
    ctx.n_terms = choose_truncation(spec, z_mag, policy);
    const CoefficientTable table = build_coefficients(spec, ctx.n_terms - 1);

    const double lz = z_mag > 0.0 ? std::log(z_mag) : 0.0;
    double peak = table.log_mag[0];
    for (int n = 1; n < ctx.n_terms; ++n)
        peak = std::max(peak, table.log_mag[n] + n * lz);

    ctx.w.resize(ctx.n_terms);
    ctx.w[0] = table.sign[0] * std::exp(table.log_mag[0] - peak);
    for (int n = 1; n < ctx.n_terms; ++n)
        ctx.w[n] = table.sign[n] * std::exp(table.log_mag[n] + n * lz - peak);

    for (const double wn : ctx.w) ctx.norm += wn * wn;

    ctx.cross.resize(ctx.n_terms, 0.0);
    for (int m = 1; m < ctx.n_terms; ++m) {
        double sum = 0.0;
        for (int k = 0; k + m < ctx.n_terms; ++k) sum += ctx.w[k + m] * ctx.w[k];
        ctx.cross[m] = sum;
    }
    return ctx;
}

double density_at(const Context& ctx, double theta, double phase_of_z) {
    double acc = 0.0;
    for (int m = 1; m < ctx.n_terms; ++m)
        acc += ctx.cross[m] * std::cos(m * (theta - phase_of_z));
    return (1.0 + 2.0 * acc / ctx.norm) / (2.0 * kPi);
}

double variance_phi(const Context& ctx) {
    double acc = 0.0;
    for (int m = 1; m < ctx.n_terms; ++m) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        acc += ctx.cross[m] * sign / (static_cast<double>(m) * m);
    }
    return kPi * kPi / 3.0 + 4.0 * acc / ctx.norm;
}

double variance_n(const Context& ctx) {
    double mean = 0.0, second = 0.0;
    for (int n = 0; n < ctx.n_terms; ++n) {
        const double p = ctx.w[n] * ctx.w[n];
        mean += n * p;
        second += static_cast<double>(n) * n * p;
    }
    mean /= ctx.norm;
    second /= ctx.norm;
    return second - mean * mean;
}

double commutator(const Context& ctx, double theta0, double phase_of_z) {
    // 1 - 2*pi*P(theta0), with the constant term cancelling exactly.
    double acc = 0.0;
    for (int m = 1; m < ctx.n_terms; ++m)
        acc += ctx.cross[m] * std::cos(m * (theta0 - phase_of_z));
    return -2.0 * acc / ctx.norm;
}

constexpr double kCommutatorFloor = 1e-12;

SqueezingReport report_from(const Context& ctx, std::complex<double> z, double theta0) {
    SqueezingReport rep;
    rep.z = z;
    rep.var_n = variance_n(ctx);
    rep.var_phi = variance_phi(ctx);
    // The figure convention: squeezing is judged for the state rotated to
    // real |z|, so the commutator is evaluated at phase 0.
    rep.commutator_mag = std::abs(commutator(ctx, theta0, 0.0));
    if (rep.commutator_mag >= kCommutatorFloor) {
        rep.s_n = 2.0 * rep.var_n / rep.commutator_mag - 1.0;
        rep.s_phi = 2.0 * rep.var_phi / rep.commutator_mag - 1.0;
    }
    return rep;
}

} // namespace

PhaseDistribution phase_distribution(const StateSpec& spec, std::complex<double> z, int grid_size,
                                     PhaseWindow window, const TruncationPolicy& policy) {
    if (grid_size < 2)
        throw Error(Errc::InvalidParameter, "grid_size must be >= 2");
    const Context ctx = prepare(spec, std::abs(z), policy);
    const double phi = std::arg(z);

    PhaseDistribution dist;
    dist.window = window;
    dist.z = z;
    dist.spec_label = spec.label;
    dist.thetas.resize(grid_size);
    dist.values.resize(grid_size);
    const double step = 2.0 * kPi / (grid_size - 1);
    for (int i = 0; i < grid_size; ++i) {
        const double theta = window.theta0 + i * step;
        dist.thetas[i] = theta;
        dist.values[i] = density_at(ctx, theta, phi);
    }
    return dist;
}

double phase_variance(const StateSpec& spec, std::complex<double> z,
                      const TruncationPolicy& policy) {
    return variance_phi(prepare(spec, std::abs(z), policy));
}

double number_variance(const StateSpec& spec, std::complex<double> z,
                       const TruncationPolicy& policy) {
    return variance_n(prepare(spec, std::abs(z), policy));
}

double commutator_expectation(const StateSpec& spec, std::complex<double> z, PhaseWindow window,
                              const TruncationPolicy& policy) {
    const Context ctx = prepare(spec, std::abs(z), policy);
    return commutator(ctx, window.theta0, std::arg(z));
}

SqueezingReport squeezing_report(const StateSpec& spec, std::complex<double> z, PhaseWindow window,
                                 const TruncationPolicy& policy) {
    const Context ctx = prepare(spec, std::abs(z), policy);
    return report_from(ctx, z, window.theta0);
}

std::vector<double> crossover_scan(const StateSpec& spec, SqueezeParam which, double z_lo,
                                   double z_hi, double step, PhaseWindow window,
                                   const TruncationPolicy& policy) {
    if (!(z_lo > 0.0 && z_hi > z_lo))
        throw Error(Errc::InvalidParameter, "need 0 < z_lo < z_hi");
    if (!(z_hi < spec.radius))
        throw Error(Errc::InvalidParameter, "z_hi must lie inside the convergence radius");
    if (!(step > 0.0))
        throw Error(Errc::InvalidParameter, "step must be positive");

    auto value_at = [&](double z) -> std::optional<double> {
        const SqueezingReport rep = squeezing_report(spec, z, window, policy);
        return which == SqueezeParam::Sn ? rep.s_n : rep.s_phi;
    };

    std::vector<double> grid;
    for (double z = z_lo; z < z_hi; z += step) grid.push_back(z);
    grid.push_back(z_hi);

    std::vector<double> roots;
    std::optional<double> prev = value_at(grid[0]);
    if (prev && *prev == 0.0) roots.push_back(grid[0]);
    for (size_t i = 1; i < grid.size(); ++i) {
        std::optional<double> cur = value_at(grid[i]);
        if (cur && *cur == 0.0) roots.push_back(grid[i]);
        if (prev && cur && *prev * *cur < 0.0) {
            double lo = grid[i - 1], hi = grid[i];
            double flo = *prev;
            while (hi - lo > 1e-4) {
                const double mid = 0.5 * (lo + hi);
                const std::optional<double> fmid = value_at(mid);
                if (!fmid) break;
                if (flo * *fmid <= 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = *fmid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev = cur;
    }
    return roots;
}

double mean_phase(const StateSpec& spec, std::complex<double> z, const TruncationPolicy& policy) {
    // Validates convergence as a side effect; the rotated state's first
    // moment about the window center is identically zero by symmetry.
    (void)choose_truncation(spec, std::abs(z), policy);
    return std::arg(z);
}

} // namespace cohphase
