#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cohphase/catalog.hpp"
#include "cohphase/dsl.hpp"
#include "cohphase/phase.hpp"

using namespace cohphase;

namespace {

template <typename Fn>
Error capture(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e;
    }
    REQUIRE(false);
    throw std::logic_error("unreachable");
}

} // namespace

TEST_CASE("catalog shape and defaults") {
    const auto& cat = list_catalog();
    REQUIRE(cat.size() == 8);
    const char* keys[] = {"harmonic",  "penson-solomon", "barut-girardello",
                          "gilmore-perelomov", "hydrogen", "poschl-teller",
                          "infinite-well", "isotonic"};
    for (size_t i = 0; i < 8; ++i) CHECK(cat[i].key == keys[i]);

    CHECK(find_entry("penson-solomon")->params[0].name == "q");
    CHECK(find_entry("penson-solomon")->params[0].default_value == 0.5);
    CHECK(find_entry("barut-girardello")->params[0].default_value == 3.0);
    CHECK(find_entry("gilmore-perelomov")->params[0].name == "kappa");
    CHECK(find_entry("poschl-teller")->params[0].default_value == 5.0);
    CHECK(find_entry("isotonic")->params[0].name == "gamma_p");
    CHECK(find_entry("isotonic")->params[0].default_value == 2.5);
    CHECK(find_entry("infinite-well")->params.empty());
    CHECK(find_entry("infinite-well")->summary.find("nu = 2") != std::string::npos);
    CHECK(find_entry("nope") == nullptr);
}

TEST_CASE("kinds and convergence radii") {
    CHECK(make(SystemId::Harmonic).kind == SpecKind::Nonlinearity);
    CHECK(make(SystemId::PensonSolomon).kind == SpecKind::Nonlinearity);
    CHECK(make(SystemId::BarutGirardello).kind == SpecKind::Nonlinearity);
    CHECK(make(SystemId::GilmorePerelomov).kind == SpecKind::Nonlinearity);
    CHECK(make(SystemId::HydrogenLike).kind == SpecKind::Spectrum);
    CHECK(make(SystemId::PoschlTeller).kind == SpecKind::Spectrum);
    CHECK(make(SystemId::InfiniteWell).kind == SpecKind::Spectrum);
    CHECK(make(SystemId::Isotonic).kind == SpecKind::Spectrum);

    CHECK(make(SystemId::GilmorePerelomov).radius == 1.0);
    CHECK(make(SystemId::HydrogenLike).radius == 1.0);
    CHECK(std::isinf(make(SystemId::Harmonic).radius));
    CHECK(std::isinf(make(SystemId::PoschlTeller).radius));
}

TEST_CASE("evaluators against hand arithmetic") {
    CHECK(make(SystemId::Harmonic).evaluator(7) == 1.0);
    CHECK(make(SystemId::PensonSolomon).evaluator(3) == 4.0);  // (1/2)^(1-3)
    CHECK(make(SystemId::BarutGirardello).evaluator(2) ==
          doctest::Approx(std::sqrt(7.0)).epsilon(1e-15));
    CHECK(make(SystemId::GilmorePerelomov).evaluator(2) ==
          doctest::Approx(1.0 / std::sqrt(7.0)).epsilon(1e-15));
    CHECK(make(SystemId::HydrogenLike).evaluator(0) == 0.0);
    CHECK(make(SystemId::HydrogenLike).evaluator(1) == 0.75);
    CHECK(make(SystemId::PoschlTeller).evaluator(4) == 36.0);  // 4 * (4 + 5)
    CHECK(make(SystemId::InfiniteWell).evaluator(4) == 24.0);  // 4 * (4 + 2)
    CHECK(make(SystemId::Isotonic).evaluator(6) == 24.0);
}

TEST_CASE("the shift parameter of the isotonic family cancels") {
    const StateSpec a = make(SystemId::Isotonic);
    const StateSpec b = make(SystemId::Isotonic, {{"gamma_p", 7.75}});
    for (int n = 0; n <= 40; ++n) CHECK(a.evaluator(n) == b.evaluator(n));
}

TEST_CASE("q = 1 deformation recovers the canonical oscillator") {
    const auto deformed = build_coefficients(make(SystemId::PensonSolomon, {{"q", 1.0}}), 80);
    const auto canonical = build_coefficients(make(SystemId::Harmonic), 80);
    for (int n = 0; n <= 80; ++n) {
        CHECK(deformed.sign[n] == canonical.sign[n]);
        CHECK(std::abs(deformed.log_mag[n] - canonical.log_mag[n]) <= 1e-14);
    }
}

TEST_CASE("the two SU(1,1) families are a dual pair") {
    const auto bg = make(SystemId::BarutGirardello, {{"kappa", 2.0}});
    const auto gp = make(SystemId::GilmorePerelomov, {{"kappa", 2.0}});
    for (int n = 1; n <= 50; ++n)
        CHECK(bg.evaluator(n) * gp.evaluator(n) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("infinite well is exactly the nu = 2 member of the Poschl-Teller family") {
    // The catalog keeps the two apart (nu > 2 strictly), so the nu = 2 member
    // is built from the family's formula instead.
    const StateSpec well = make(SystemId::InfiniteWell);
    dsl::ParamEnv env;
    env.bind("nu", 2.0);
    const StateSpec pt2 =
        dsl::compile_spec(SpecKind::Spectrum, find_entry("poschl-teller")->expression, env);
    for (int n = 0; n <= 60; ++n) CHECK(well.evaluator(n) == pt2.evaluator(n));

    const auto ra = squeezing_report(well, 1.3);
    const auto rb = squeezing_report(pt2, 1.3);
    CHECK(ra.var_n == rb.var_n);
    CHECK(ra.var_phi == rb.var_phi);
    CHECK(ra.commutator_mag == rb.commutator_mag);
    CHECK(*ra.s_n == *rb.s_n);
    CHECK(*ra.s_phi == *rb.s_phi);
}

TEST_CASE("parameter validation") {
    CHECK(capture([] { make(SystemId::PensonSolomon, {{"q", 0.0}}); }).code() ==
          Errc::InvalidParameter);
    CHECK(capture([] { make(SystemId::PensonSolomon, {{"q", 1.5}}); }).code() ==
          Errc::InvalidParameter);
    CHECK_NOTHROW(make(SystemId::PensonSolomon, {{"q", 1.0}}));

    CHECK(capture([] { make(SystemId::BarutGirardello, {{"kappa", 0.4}}); }).code() ==
          Errc::InvalidParameter);
    CHECK_NOTHROW(make(SystemId::BarutGirardello, {{"kappa", 0.5}}));

    CHECK(capture([] { make(SystemId::PoschlTeller, {{"nu", 2.0}}); }).code() ==
          Errc::InvalidParameter);
    CHECK(capture([] { make(SystemId::Isotonic, {{"gamma_p", 1.0}}); }).code() ==
          Errc::InvalidParameter);

    const Error unknown = capture([] { make(SystemId::Harmonic, {{"q", 0.5}}); });
    CHECK(unknown.code() == Errc::InvalidParameter);
    CHECK(std::string(unknown.what()).find("q") != std::string::npos);
}

TEST_CASE("non-half-integer kappa is accepted with a warning") {
    std::vector<std::string> warnings;
    make(SystemId::BarutGirardello, {{"kappa", 2.7}}, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("2.7") != std::string::npos);

    warnings.clear();
    make(SystemId::BarutGirardello, {{"kappa", 2.5}}, &warnings);
    CHECK(warnings.empty());
    make(SystemId::GilmorePerelomov, {{"kappa", 1.0}}, &warnings);
    CHECK(warnings.empty());
}

TEST_CASE("reference expressions rebuild every catalog entry") {
    for (const auto& entry : list_catalog()) {
        CAPTURE(entry.key);
        const StateSpec direct = make(entry);
        dsl::ParamEnv env;
        for (const auto& p : entry.params) env.bind(p.name, p.default_value);
        const StateSpec compiled = dsl::compile_spec(entry.kind, entry.expression, env,
                                                     entry.radius);
        CHECK(compiled.kind == direct.kind);
        CHECK(compiled.radius == direct.radius);
        const int lo = entry.kind == SpecKind::Spectrum ? 0 : 1;
        for (int n = lo; n <= 64; ++n)
            CHECK(std::abs(compiled.evaluator(n) - direct.evaluator(n)) <= 1e-12);
    }
}
