#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "cohphase/catalog.hpp"
#include "cohphase/checks.hpp"
#include "cohphase/config.hpp"
#include "cohphase/dsl.hpp"
#include "cohphase/io.hpp"
#include "cohphase/phase.hpp"

namespace {

using namespace cohphase;

// ---------------------------------------------------------------------------
// Shared flag storage.  One subcommand runs per invocation, so the single
// struct is safe; presence is queried through the active subcommand.

struct Cli {
    std::string system;
    std::vector<std::string> params;
    std::string kind;
    std::string expr;
    double radius = 0.0;
    std::string preset;
    std::string config_path;

    double z = 0.0;
    double z_phase = 0.0;
    double z_lo = 0.0;
    double z_hi = 0.0;
    int z_count = 0;
    double step = 0.05;

    int theta_grid = 2001;
    double theta0 = -kPi;
    double tail_tol = 1e-12;
    int n_cap = 512;

    std::string output;
    std::string format;
    std::string which = "Sn";
    bool all = false;
};

[[noreturn]] void usage_error(const std::string& what) { throw Error(Errc::ConfigError, what); }

// True when the flag exists on this subcommand and the user supplied it.
bool given(const CLI::App* sub, const std::string& name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

// ---------------------------------------------------------------------------
// Presets: the figure-reproduction parameter sets.  Catalog defaults already
// carry the per-system parameters, so a preset pins the system and a z range.

struct Preset {
    const char* name;
    const char* system;
    double lo;
    double hi;
    int count;
};

const Preset kPresets[] = {
    {"fig1", "penson-solomon", 0.5, 2.0, 4},    {"fig2", "penson-solomon", 0.02, 4.0, 200},
    {"fig3", "barut-girardello", 0.5, 2.0, 4},  {"fig4", "barut-girardello", 0.02, 4.0, 200},
    {"fig5", "gilmore-perelomov", 0.3, 0.9, 3}, {"fig6", "gilmore-perelomov", 0.02, 0.95, 200},
    {"fig7", "hydrogen", 0.3, 0.9, 3},          {"fig8", "hydrogen", 0.02, 0.95, 200},
    {"fig9", "poschl-teller", 0.5, 2.0, 4},     {"fig10", "poschl-teller", 0.02, 4.0, 200},
    {"fig11", "isotonic", 0.5, 2.0, 4},         {"fig12", "isotonic", 0.02, 4.0, 200},
};

const Preset& find_preset(const std::string& name) {
    for (const auto& p : kPresets)
        if (name == p.name) return p;
    usage_error("unknown preset '" + name + "' (expected fig1 ... fig12)");
}

// ---------------------------------------------------------------------------

std::map<std::string, double> parse_param_flags(const std::vector<std::string>& raw) {
    std::map<std::string, double> out;
    for (const std::string& item : raw) {
        const size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            usage_error("--param expects name=value, got '" + item + "'");
        const std::string name = item.substr(0, eq);
        const std::string text = item.substr(eq + 1);
        char* end = nullptr;
        const double value = std::strtod(text.c_str(), &end);
        if (text.empty() || end != text.c_str() + text.size())
            usage_error("--param " + name + ": '" + text + "' is not a number");
        out[name] = value;
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) usage_error("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) usage_error("cannot open output file '" + path + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) usage_error("failed writing output file '" + path + "'");
}

// Builds the effective RunConfig: config file first, then preset, then
// explicit flags, later layers overriding earlier ones.
RunConfig assemble(const Cli& c, const CLI::App* sub) {
    RunConfig cfg;
    if (given(sub, "--config")) cfg = load_config(read_file(c.config_path));

    if (given(sub, "--preset")) {
        const Preset& p = find_preset(c.preset);
        cfg.system = SystemRef{};
        cfg.system.catalog_key = p.system;
        cfg.z = ZSelection{};
        cfg.z.sweep = true;
        cfg.z.lo = p.lo;
        cfg.z.hi = p.hi;
        cfg.z.count = p.count;
    }

    if (given(sub, "--expr")) {
        cfg.system = SystemRef{};
        cfg.system.expr = c.expr;
        if (!given(sub, "--kind")) usage_error("expression systems need --kind f|e");
        if (c.kind == "f") cfg.system.kind = SpecKind::Nonlinearity;
        else if (c.kind == "e") cfg.system.kind = SpecKind::Spectrum;
        else usage_error("--kind must be f or e, got '" + c.kind + "'");
        if (given(sub, "--radius")) cfg.system.radius = c.radius;
    } else if (given(sub, "--system")) {
        if (c.system == "dsl") usage_error("--system dsl needs --expr and --kind");
        cfg.system = SystemRef{};
        cfg.system.catalog_key = c.system;
    }
    if (given(sub, "--param"))
        for (const auto& [name, value] : parse_param_flags(c.params))
            cfg.system.params[name] = value;

    const bool single_flag = given(sub, "--z") || given(sub, "--z-phase");
    const bool sweep_flag =
        given(sub, "--z-lo") || given(sub, "--z-hi") || given(sub, "--z-count");
    if (single_flag && sweep_flag)
        usage_error("choose either --z/--z-phase or a --z-lo/--z-hi/--z-count sweep");
    if (single_flag) {
        cfg.z = ZSelection{};
        cfg.z.mag = c.z;
        cfg.z.phase = c.z_phase;
    } else if (sweep_flag) {
        if (!cfg.z.sweep) {
            if (!(given(sub, "--z-lo") && given(sub, "--z-hi")))
                usage_error("a sweep needs --z-lo and --z-hi");
            cfg.z = ZSelection{};
            cfg.z.sweep = true;
            cfg.z.count = 101;
        }
        if (given(sub, "--z-lo")) cfg.z.lo = c.z_lo;
        if (given(sub, "--z-hi")) cfg.z.hi = c.z_hi;
        if (given(sub, "--z-count")) cfg.z.count = c.z_count;
    }

    if (given(sub, "--theta-grid")) cfg.theta_grid = c.theta_grid;
    if (given(sub, "--theta0")) cfg.window_theta0 = c.theta0;
    if (given(sub, "--tail-tol")) cfg.tail_tol = c.tail_tol;
    if (given(sub, "--n-cap")) cfg.n_cap = c.n_cap;
    if (given(sub, "--output")) cfg.output_path = c.output;
    if (given(sub, "--format")) {
        if (c.format == "csv") cfg.format = OutputFormat::Csv;
        else if (c.format == "json") cfg.format = OutputFormat::Json;
        else usage_error("--format must be csv or json, got '" + c.format + "'");
    }
    validate(cfg);
    return cfg;
}

StateSpec realize_and_warn(const RunConfig& cfg) {
    std::vector<std::string> warnings;
    StateSpec spec = realize_system(cfg.system, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    return spec;
}

// Resolved parameter values for artifact metadata: catalog defaults overlaid
// with the user's overrides.
std::map<std::string, double> resolved_params(const SystemRef& ref) {
    std::map<std::string, double> out;
    if (ref.expr.empty())
        if (const CatalogEntry* entry = find_entry(ref.catalog_key))
            for (const auto& p : entry->params) out[p.name] = p.default_value;
    for (const auto& [name, value] : ref.params) out[name] = value;
    return out;
}

std::vector<double> sweep_points(const ZSelection& z) {
    std::vector<double> points;
    if (z.count == 1) {
        points.push_back(z.lo);
        return points;
    }
    const double step = (z.hi - z.lo) / (z.count - 1);
    for (int i = 0; i + 1 < z.count; ++i) points.push_back(z.lo + i * step);
    points.push_back(z.hi);
    return points;
}

// Index-parallel loop; worker count capped by COHPHASE_THREADS.  The first
// exception thrown by any worker is rethrown after the join.
void parallel_for(int count, const std::function<void(int)>& body) {
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (const char* env = std::getenv("COHPHASE_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end && *end == '\0' && cap > 0 && cap < workers) workers = static_cast<int>(cap);
    }
    if (workers > count) workers = count;
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_dist(const Cli& c, const CLI::App* sub) {
    const RunConfig cfg = assemble(c, sub);
    const StateSpec spec = realize_and_warn(cfg);
    validate_sweep_domain(cfg, spec);
    const TruncationPolicy policy{cfg.tail_tol, cfg.n_cap};
    const PhaseWindow window{cfg.window_theta0};

    std::vector<std::complex<double>> zs;
    if (cfg.z.sweep)
        for (const double m : sweep_points(cfg.z)) zs.push_back(m);
    else
        zs.push_back(std::polar(cfg.z.mag, cfg.z.phase));

    std::vector<PhaseDistribution> dists(zs.size());
    parallel_for(static_cast<int>(zs.size()), [&](int i) {
        dists[i] = phase_distribution(spec, zs[i], cfg.theta_grid, window, policy);
    });
    emit(cfg.format == OutputFormat::Csv ? dist_csv(dists) : dist_json(dists), cfg.output_path);
    return 0;
}

int cmd_squeeze(const Cli& c, const CLI::App* sub) {
    const RunConfig cfg = assemble(c, sub);
    if (!cfg.z.sweep) usage_error("squeeze needs a z sweep (--z-lo/--z-hi/--z-count)");
    const StateSpec spec = realize_and_warn(cfg);
    validate_sweep_domain(cfg, spec);
    const TruncationPolicy policy{cfg.tail_tol, cfg.n_cap};
    const PhaseWindow window{cfg.window_theta0};

    const std::vector<double> zs = sweep_points(cfg.z);
    std::vector<SqueezeRow> rows(zs.size());
    std::vector<std::string> row_warnings(zs.size());
    parallel_for(static_cast<int>(zs.size()), [&](int i) {
        rows[i].z = zs[i];
        try {
            const SqueezingReport rep = squeezing_report(spec, zs[i], window, policy);
            rows[i].var_n = rep.var_n;
            rows[i].var_phi = rep.var_phi;
            rows[i].commutator = rep.commutator_mag;
            rows[i].s_n = rep.s_n;
            rows[i].s_phi = rep.s_phi;
        } catch (const Error& e) {
            if (!e.numeric()) throw;
            row_warnings[i] = std::string("warning: z = ") + format_double(zs[i]) + ": [" +
                              e.code_name() + "] " + e.what();
        }
    });
    for (const auto& w : row_warnings)
        if (!w.empty()) std::cerr << w << "\n";
    emit(cfg.format == OutputFormat::Csv ? squeeze_csv(rows) : squeeze_json(rows),
         cfg.output_path);
    return 0;
}

int cmd_crossover(const Cli& c, const CLI::App* sub) {
    const RunConfig cfg = assemble(c, sub);
    if (!cfg.z.sweep) usage_error("crossover needs a z range (--z-lo/--z-hi)");
    SqueezeParam which;
    if (c.which == "Sn") which = SqueezeParam::Sn;
    else if (c.which == "Sphi") which = SqueezeParam::Sphi;
    else usage_error("--which must be Sn or Sphi, got '" + c.which + "'");
    if (!(c.step > 0.0)) usage_error("--step must be positive");

    const StateSpec spec = realize_and_warn(cfg);
    validate_sweep_domain(cfg, spec);
    const TruncationPolicy policy{cfg.tail_tol, cfg.n_cap};
    const PhaseWindow window{cfg.window_theta0};

    CrossoverResult result;
    result.system = cfg.system.expr.empty() ? cfg.system.catalog_key : cfg.system.expr;
    result.params = resolved_params(cfg.system);
    result.which = which;
    result.roots = crossover_scan(spec, which, cfg.z.lo, cfg.z.hi, c.step, window, policy);
    emit(crossover_json(result), cfg.output_path);
    return 0;
}

int check_one(const StateSpec& spec, const TruncationPolicy& policy) {
    const auto results = run_checks(spec, policy);
    std::cout << spec.label << "\n";
    for (const auto& r : results) {
        std::cout << (r.passed ? "  [ PASS ] " : "  [ FAIL ] ") << r.name;
        for (size_t pad = r.name.size(); pad < 28; ++pad) std::cout << ' ';
        std::cout << ' ' << r.detail << "\n";
    }
    return all_passed(results) ? 0 : 1;
}

int cmd_check(const Cli& c, const CLI::App* sub) {
    if (c.all) {
        if (given(sub, "--system") || given(sub, "--expr") || given(sub, "--config"))
            usage_error("--all cannot be combined with a system selection");
        const TruncationPolicy policy{c.tail_tol, c.n_cap};
        int status = 0;
        for (const auto& entry : list_catalog())
            if (check_one(make(entry), policy) != 0) status = 1;
        return status;
    }
    const RunConfig cfg = assemble(c, sub);
    if (cfg.system.catalog_key.empty() && cfg.system.expr.empty())
        usage_error("check needs --system, --expr, or --all");
    return check_one(realize_and_warn(cfg), TruncationPolicy{cfg.tail_tol, cfg.n_cap});
}

int cmd_list() {
    for (const auto& entry : list_catalog()) {
        std::cout << entry.key;
        for (size_t pad = entry.key.size(); pad < 18; ++pad) std::cout << ' ';
        std::cout << (entry.kind == SpecKind::Nonlinearity ? "f-built  " : "e-built  ");
        if (std::isfinite(entry.radius))
            std::cout << "|z| < " << format_double(entry.radius) << "  ";
        else
            std::cout << "any z    ";
        std::cout << entry.summary << "\n";
        for (const auto& p : entry.params)
            std::cout << "                  " << p.name << " = " << format_double(p.default_value)
                      << "  (" << p.range_text() << "): " << p.doc << "\n";
    }
    return 0;
}

void add_system_flags(CLI::App* sub, Cli& c) {
    sub->add_option("--system", c.system, "catalog system key, or 'dsl' with --expr");
    sub->add_option("--param", c.params, "parameter override, name=value (repeatable)");
    sub->add_option("--kind", c.kind, "expression kind: f (nonlinearity) or e (spectrum)");
    sub->add_option("--expr", c.expr, "inline expression in n, e.g. \"n*(n + 5)\"");
    sub->add_option("--radius", c.radius, "convergence radius for expression systems");
    sub->add_option("--tail-tol", c.tail_tol, "series tail tolerance");
    sub->add_option("--n-cap", c.n_cap, "hard cap on series terms");
}

void add_run_flags(CLI::App* sub, Cli& c, bool with_single_z) {
    sub->add_option("--preset", c.preset, "figure preset fig1 ... fig12");
    sub->add_option("--config", c.config_path, "JSON run configuration file");
    if (with_single_z) {
        sub->add_option("--z", c.z, "coherence amplitude magnitude");
        sub->add_option("--z-phase", c.z_phase, "phase angle of z in radians");
    }
    sub->add_option("--z-lo", c.z_lo, "sweep start magnitude");
    sub->add_option("--z-hi", c.z_hi, "sweep end magnitude");
    sub->add_option("--z-count", c.z_count, "number of sweep points");
    sub->add_option("--theta0", c.theta0, "phase window start (default -pi)");
    sub->add_option("--output", c.output, "output path (default stdout)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pegg-Barnett phase statistics of generalized coherent states"};
    app.require_subcommand(1);
    Cli c;

    CLI::App* dist = app.add_subcommand("dist", "sample the phase distribution");
    add_system_flags(dist, c);
    add_run_flags(dist, c, true);
    dist->add_option("--theta-grid", c.theta_grid, "grid points across the window");
    dist->add_option("--format", c.format, "output format: csv or json");

    CLI::App* squeeze = app.add_subcommand("squeeze", "sweep variances and squeezing parameters");
    add_system_flags(squeeze, c);
    add_run_flags(squeeze, c, false);
    squeeze->add_option("--format", c.format, "output format: csv or json");

    CLI::App* crossover =
        app.add_subcommand("crossover", "locate zero crossings of a squeezing parameter");
    add_system_flags(crossover, c);
    add_run_flags(crossover, c, false);
    crossover->add_option("--which", c.which, "Sn or Sphi");
    crossover->add_option("--step", c.step, "scan step before bisection");

    CLI::App* check = app.add_subcommand("check", "run the invariant suite");
    add_system_flags(check, c);
    check->add_option("--config", c.config_path, "JSON run configuration file");
    check->add_flag("--all", c.all, "check every catalog system");

    CLI::App* list = app.add_subcommand("list", "describe the catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(dist)) return cmd_dist(c, dist);
        if (app.got_subcommand(squeeze)) return cmd_squeeze(c, squeeze);
        if (app.got_subcommand(crossover)) return cmd_crossover(c, crossover);
        if (app.got_subcommand(check)) return cmd_check(c, check);
        if (app.got_subcommand(list)) return cmd_list();
    } catch (const Error& e) {
        std::cerr << "error: [" << e.code_name() << "] " << e.what() << "\n";
        return e.numeric() ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
