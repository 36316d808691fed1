#include "cohphase/catalog.hpp"

#include <cmath>
#include <limits>

#include "cohphase/io.hpp"

namespace cohphase {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The lambdas below mirror the reference expressions operation-for-operation
// (same association, same std functions) so that catalog-built and
// expression-built specs produce identical doubles, not merely close ones.

StateSpec harmonic_spec() {
    return {SpecKind::Nonlinearity, [](int) { return 1.0; }, kInf, "harmonic"};
}

StateSpec penson_solomon_spec(double q) {
    auto f = [q](int n) {
        const double x = n;
        return std::pow(q, 1.0 - x);
    };
    return {SpecKind::Nonlinearity, f, kInf, "penson-solomon(q=" + format_double(q) + ")"};
}

StateSpec barut_girardello_spec(double kappa) {
    auto f = [kappa](int n) {
        const double x = n;
        return std::sqrt(x + 2.0 * kappa - 1.0);
    };
    return {SpecKind::Nonlinearity, f, kInf, "barut-girardello(kappa=" + format_double(kappa) + ")"};
}

StateSpec gilmore_perelomov_spec(double kappa) {
    auto f = [kappa](int n) {
        const double x = n;
        return 1.0 / std::sqrt(x + 2.0 * kappa - 1.0);
    };
    return {SpecKind::Nonlinearity, f, 1.0,
            "gilmore-perelomov(kappa=" + format_double(kappa) + ")"};
}

StateSpec hydrogen_spec() {
    auto e = [](int n) {
        const double x = n;
        return 1.0 - 1.0 / std::pow(x + 1.0, 2.0);
    };
    return {SpecKind::Spectrum, e, 1.0, "hydrogen"};
}

StateSpec poschl_teller_spec(double nu) {
    auto e = [nu](int n) {
        const double x = n;
        return x * (x + nu);
    };
    return {SpecKind::Spectrum, e, kInf, "poschl-teller(nu=" + format_double(nu) + ")"};
}

StateSpec infinite_well_spec() {
    auto e = [](int n) {
        const double x = n;
        return x * (x + 2.0);
    };
    return {SpecKind::Spectrum, e, kInf, "infinite-well"};
}

StateSpec isotonic_spec(double gamma_p) {
    auto e = [](int n) {
        const double x = n;
        return 4.0 * x;
    };
    return {SpecKind::Spectrum, e, kInf, "isotonic(gamma_p=" + format_double(gamma_p) + ")"};
}

ParamInfo kappa_param() {
    return {"kappa", 3.0, 0.5, false, kInf, true,
            "representation index; physical values are half-integers 1/2, 1, 3/2, ... "
            "(other reals >= 1/2 are accepted with a warning)"};
}

std::vector<CatalogEntry> build_catalog() {
    std::vector<CatalogEntry> cat;
    cat.push_back({SystemId::Harmonic, "harmonic",
                   "canonical coherent states, f(n) = 1", SpecKind::Nonlinearity, "1", kInf, {}});
    cat.push_back({SystemId::PensonSolomon, "penson-solomon",
                   "Penson-Solomon deformed states, f(n) = q^(1-n)", SpecKind::Nonlinearity,
                   "q^(1 - n)", kInf,
                   {{"q", 0.5, 0.0, true, 1.0, false,
                     "deformation strength; q = 1 recovers the harmonic family"}}});
    cat.push_back({SystemId::BarutGirardello, "barut-girardello",
                   "Barut-Girardello states, f(n) = sqrt(n + 2*kappa - 1)", SpecKind::Nonlinearity,
                   "sqrt(n + 2*kappa - 1)", kInf, {kappa_param()}});
    cat.push_back({SystemId::GilmorePerelomov, "gilmore-perelomov",
                   "Gilmore-Perelomov states, f(n) = 1/sqrt(n + 2*kappa - 1), defined for |z| < 1",
                   SpecKind::Nonlinearity, "1 / sqrt(n + 2*kappa - 1)", 1.0, {kappa_param()}});
    cat.push_back({SystemId::HydrogenLike, "hydrogen",
                   "hydrogen-like spectrum e_n = 1 - 1/(n+1)^2, defined for |z| < 1",
                   SpecKind::Spectrum, "1 - 1/(n + 1)^2", 1.0, {}});
    cat.push_back({SystemId::PoschlTeller, "poschl-teller",
                   "Poschl-Teller potential spectrum e_n = n*(n + nu)", SpecKind::Spectrum,
                   "n*(n + nu)", kInf,
                   {{"nu", 5.0, 2.0, true, kInf, true, "potential shape parameter, nu > 2"}}});
    cat.push_back({SystemId::InfiniteWell, "infinite-well",
                   "infinite square well, the nu = 2 specialization of poschl-teller",
                   SpecKind::Spectrum, "n*(n + 2)", kInf, {}});
    cat.push_back({SystemId::Isotonic, "isotonic",
                   "isotonic oscillator shifted spectrum e_n = 4*n", SpecKind::Spectrum, "4*n",
                   kInf,
                   {{"gamma_p", 2.5, 1.0, true, kInf, true,
                     "potential strength parameter; it cancels from the shifted spectrum 4*n, "
                     "so every result is independent of gamma_p"}}});
    return cat;
}

std::map<std::string, double> resolve_params(const CatalogEntry& entry,
                                             const std::map<std::string, double>& overrides) {
    std::map<std::string, double> values;
    for (const auto& p : entry.params) values[p.name] = p.default_value;
    for (const auto& [name, value] : overrides) {
        if (!values.count(name))
            throw Error(Errc::InvalidParameter,
                        entry.key + " has no parameter '" + name + "'");
        values[name] = value;
    }
    for (const auto& p : entry.params) {
        const double v = values[p.name];
        if (!p.accepts(v))
            throw Error(Errc::InvalidParameter, entry.key + ": " + p.name + " = " +
                                                    format_double(v) + " violates " +
                                                    p.range_text());
    }
    return values;
}

bool half_integer(double v) { return std::abs(2.0 * v - std::round(2.0 * v)) <= 1e-9; }

} // namespace

std::string ParamInfo::range_text() const {
    if (hi == kInf)
        return name + (lo_open ? " > " : " >= ") + format_double(lo);
    return format_double(lo) + (lo_open ? " < " : " <= ") + name +
           (hi_open ? " < " : " <= ") + format_double(hi);
}

const std::vector<CatalogEntry>& list_catalog() {
    static const std::vector<CatalogEntry> cat = build_catalog();
    return cat;
}

const CatalogEntry* find_entry(std::string_view key) {
    for (const auto& entry : list_catalog())
        if (entry.key == key) return &entry;
    return nullptr;
}

StateSpec make(const CatalogEntry& entry, const std::map<std::string, double>& overrides,
               std::vector<std::string>* warnings) {
    auto values = resolve_params(entry, overrides);
    if (values.count("kappa") && !half_integer(values["kappa"]) && warnings)
        warnings->push_back(entry.key + ": kappa = " + format_double(values["kappa"]) +
                            " is not a half-integer; the group-representation constraint "
                            "is not satisfied");
    switch (entry.id) {
        case SystemId::Harmonic:         return harmonic_spec();
        case SystemId::PensonSolomon:    return penson_solomon_spec(values["q"]);
        case SystemId::BarutGirardello:  return barut_girardello_spec(values["kappa"]);
        case SystemId::GilmorePerelomov: return gilmore_perelomov_spec(values["kappa"]);
        case SystemId::HydrogenLike:     return hydrogen_spec();
        case SystemId::PoschlTeller:     return poschl_teller_spec(values["nu"]);
        case SystemId::InfiniteWell:     return infinite_well_spec();
        case SystemId::Isotonic:         return isotonic_spec(values["gamma_p"]);
    }
    throw Error(Errc::InvalidParameter, "unknown catalog id");
}

StateSpec make(SystemId id, const std::map<std::string, double>& overrides,
               std::vector<std::string>* warnings) {
    for (const auto& entry : list_catalog())
        if (entry.id == id) return make(entry, overrides, warnings);
    throw Error(Errc::InvalidParameter, "unknown catalog id");
}

} // namespace cohphase
