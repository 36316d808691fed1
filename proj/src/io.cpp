#include "cohphase/io.hpp"

#include <charconv>
#include <cmath>

#include "json.hpp"

namespace cohphase {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

void check_shared_grid(const std::vector<PhaseDistribution>& dists) {
    if (dists.empty())
        throw Error(Errc::InvalidParameter, "no distributions to serialize");
    for (const auto& d : dists)
        if (d.thetas.size() != dists.front().thetas.size())
            throw Error(Errc::InvalidParameter, "distributions do not share a theta grid");
}

ordered_json json_value(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

} // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string dist_csv(const std::vector<PhaseDistribution>& dists) {
    check_shared_grid(dists);
    std::string out = "theta";
    if (dists.size() == 1) {
        out += ",P\n";
    } else {
        for (const auto& d : dists) out += ",P_z" + format_double(std::abs(d.z));
        out += '\n';
    }
    for (size_t i = 0; i < dists.front().thetas.size(); ++i) {
        out += format_double(dists.front().thetas[i]);
        for (const auto& d : dists) out += "," + format_double(d.values[i]);
        out += '\n';
    }
    return out;
}

std::string squeeze_csv(const std::vector<SqueezeRow>& rows) {
    std::string out = "z,var_n,var_phi,commutator,S_n,S_phi\n";
    for (const auto& r : rows) {
        out += format_double(r.z);
        out += "," + cell(r.var_n);
        out += "," + cell(r.var_phi);
        out += "," + cell(r.commutator);
        out += "," + cell(r.s_n);
        out += "," + cell(r.s_phi);
        out += '\n';
    }
    return out;
}

std::string dist_json(const std::vector<PhaseDistribution>& dists) {
    check_shared_grid(dists);
    ordered_json doc;
    doc["system"] = dists.front().spec_label;
    doc["window_theta0"] = dists.front().window.theta0;
    doc["z"] = ordered_json::array();
    for (const auto& d : dists)
        doc["z"].push_back({{"mag", std::abs(d.z)}, {"phase", std::arg(d.z)}});
    doc["theta"] = dists.front().thetas;
    doc["P"] = ordered_json::array();
    for (const auto& d : dists) doc["P"].push_back(d.values);
    return doc.dump(2) + "\n";
}

std::string squeeze_json(const std::vector<SqueezeRow>& rows) {
    ordered_json doc;
    doc["rows"] = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json row;
        row["z"] = r.z;
        row["var_n"] = json_value(r.var_n);
        row["var_phi"] = json_value(r.var_phi);
        row["commutator"] = json_value(r.commutator);
        row["S_n"] = json_value(r.s_n);
        row["S_phi"] = json_value(r.s_phi);
        doc["rows"].push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

std::string crossover_json(const CrossoverResult& result) {
    ordered_json doc;
    doc["system"] = result.system;
    doc["params"] = ordered_json::object();
    for (const auto& [name, value] : result.params) doc["params"][name] = value;
    doc["which"] = result.which == SqueezeParam::Sn ? "Sn" : "Sphi";
    doc["roots"] = result.roots;
    doc["tol"] = result.tol;
    return doc.dump(2) + "\n";
}

} // namespace cohphase
