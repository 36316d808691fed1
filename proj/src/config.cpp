#include "cohphase/config.hpp"

#include <cmath>

#include "json.hpp"

#include "cohphase/catalog.hpp"
#include "cohphase/dsl.hpp"

namespace cohphase {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::ConfigError, what); }

void require_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool known = false;
        for (const char* a : allowed)
            if (key == a) known = true;
        if (!known) bad(std::string("unknown key '") + key + "' in " + where);
    }
}

double number_field(const json& obj, const char* key, const char* where) {
    if (!obj.at(key).is_number()) bad(std::string(key) + " in " + where + " must be a number");
    return obj.at(key).get<double>();
}

std::map<std::string, double> param_map(const json& obj, const char* where) {
    if (!obj.is_object()) bad(std::string("params in ") + where + " must be an object");
    std::map<std::string, double> out;
    for (const auto& [key, value] : obj.items()) {
        if (!value.is_number()) bad("parameter '" + key + "' in " + where + " must be a number");
        out[key] = value.get<double>();
    }
    return out;
}

SystemRef parse_system(const json& node) {
    SystemRef ref;
    if (node.is_string()) {
        ref.catalog_key = node.get<std::string>();
        return ref;
    }
    if (!node.is_object()) bad("system must be a catalog key or an object");
    if (node.contains("expr")) {
        require_keys(node, "system", {"kind", "expr", "params", "radius"});
        if (!node.contains("kind")) bad("expression system needs \"kind\" (\"f\" or \"e\")");
        const std::string kind = node.at("kind").get<std::string>();
        if (kind == "f") ref.kind = SpecKind::Nonlinearity;
        else if (kind == "e") ref.kind = SpecKind::Spectrum;
        else bad("system kind must be \"f\" or \"e\", got \"" + kind + "\"");
        ref.expr = node.at("expr").get<std::string>();
        if (node.contains("params")) ref.params = param_map(node.at("params"), "system");
        if (node.contains("radius")) ref.radius = number_field(node, "radius", "system");
    } else {
        require_keys(node, "system", {"id", "params"});
        if (!node.contains("id")) bad("system object needs \"id\" or \"expr\"");
        ref.catalog_key = node.at("id").get<std::string>();
        if (node.contains("params")) ref.params = param_map(node.at("params"), "system");
    }
    return ref;
}

ZSelection parse_single_z(const json& node) {
    ZSelection z;
    z.sweep = false;
    if (node.is_number()) {
        z.mag = node.get<double>();
        return z;
    }
    if (!node.is_object()) bad("z must be a number or {\"mag\", \"phase\"}");
    require_keys(node, "z", {"mag", "phase"});
    if (!node.contains("mag")) bad("z object needs \"mag\"");
    z.mag = number_field(node, "mag", "z");
    if (node.contains("phase")) z.phase = number_field(node, "phase", "z");
    return z;
}

ZSelection parse_sweep(const json& node) {
    ZSelection z;
    z.sweep = true;
    if (!node.is_object()) bad("z_sweep must be {\"lo\", \"hi\", \"count\"}");
    require_keys(node, "z_sweep", {"lo", "hi", "count"});
    for (const char* key : {"lo", "hi", "count"})
        if (!node.contains(key)) bad(std::string("z_sweep needs \"") + key + "\"");
    z.lo = number_field(node, "lo", "z_sweep");
    z.hi = number_field(node, "hi", "z_sweep");
    if (!node.at("count").is_number_integer()) bad("z_sweep count must be an integer");
    z.count = node.at("count").get<int>();
    return z;
}

} // namespace

RunConfig load_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        bad(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) bad("config root must be an object");
    require_keys(doc, "config",
                 {"system", "z", "z_sweep", "theta_grid", "window_theta0", "tail_tol", "n_cap",
                  "output"});

    RunConfig config;
    if (!doc.contains("system")) bad("config needs \"system\"");
    config.system = parse_system(doc.at("system"));

    if (doc.contains("z") == doc.contains("z_sweep"))
        bad("config needs exactly one of \"z\" and \"z_sweep\"");
    if (doc.contains("z")) config.z = parse_single_z(doc.at("z"));
    else config.z = parse_sweep(doc.at("z_sweep"));

    if (doc.contains("theta_grid")) {
        if (!doc.at("theta_grid").is_number_integer()) bad("theta_grid must be an integer");
        config.theta_grid = doc.at("theta_grid").get<int>();
    }
    if (doc.contains("window_theta0"))
        config.window_theta0 = number_field(doc, "window_theta0", "config");
    if (doc.contains("tail_tol")) config.tail_tol = number_field(doc, "tail_tol", "config");
    if (doc.contains("n_cap")) {
        if (!doc.at("n_cap").is_number_integer()) bad("n_cap must be an integer");
        config.n_cap = doc.at("n_cap").get<int>();
    }
    if (doc.contains("output")) {
        const json& out = doc.at("output");
        if (!out.is_object()) bad("output must be {\"path\", \"format\"}");
        require_keys(out, "output", {"path", "format"});
        if (out.contains("path")) config.output_path = out.at("path").get<std::string>();
        if (out.contains("format")) {
            const std::string fmt = out.at("format").get<std::string>();
            if (fmt == "csv") config.format = OutputFormat::Csv;
            else if (fmt == "json") config.format = OutputFormat::Json;
            else bad("output format must be \"csv\" or \"json\", got \"" + fmt + "\"");
        }
    }
    return config;
}

void validate(const RunConfig& config) {
    if (config.theta_grid < 2) bad("theta_grid must be >= 2");
    if (!std::isfinite(config.window_theta0)) bad("window_theta0 must be finite");
    if (!(config.tail_tol > 0.0 && config.tail_tol < 1.0)) bad("tail_tol must lie in (0, 1)");
    if (config.n_cap < 2) bad("n_cap must be >= 2");
    if (config.system.radius && !(*config.system.radius > 0.0)) bad("radius must be positive");
    if (config.z.sweep) {
        if (config.z.count < 1) bad("z_sweep count must be >= 1");
        if (!(config.z.lo >= 0.0)) bad("z_sweep lo must be >= 0");
        if (!(config.z.hi >= config.z.lo)) bad("z_sweep hi must be >= lo");
    } else {
        if (!(config.z.mag >= 0.0)) bad("z magnitude must be >= 0");
        if (!std::isfinite(config.z.phase)) bad("z phase must be finite");
    }
}

void validate_sweep_domain(const RunConfig& config, const StateSpec& spec) {
    if (config.z.sweep && std::isfinite(spec.radius) && !(config.z.hi < spec.radius))
        bad("z_sweep hi = " + std::to_string(config.z.hi) +
            " must be strictly inside the convergence radius " + std::to_string(spec.radius));
}

StateSpec realize_system(const SystemRef& ref, std::vector<std::string>* warnings) {
    if (ref.catalog_key.empty() && ref.expr.empty()) bad("no system selected");
    if (!ref.expr.empty()) {
        const dsl::ParamEnv env(ref.params);
        const double radius =
            ref.radius ? *ref.radius : std::numeric_limits<double>::infinity();
        return dsl::compile_spec(ref.kind, ref.expr, env, radius);
    }
    const CatalogEntry* entry = find_entry(ref.catalog_key);
    if (!entry) bad("unknown system '" + ref.catalog_key + "'");
    return make(*entry, ref.params, warnings);
}

} // namespace cohphase
