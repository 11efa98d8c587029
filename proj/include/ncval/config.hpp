#pragma once

#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ncval/grid.hpp"
#include "ncval/qubit.hpp"

namespace ncval::config {

using nlohmann::json;

// Parsed scenario document. Exactly one of the scenario blocks is populated.
struct RunConfig {
    std::string scenario; // "qubit", "grid" or "grid-appendix"
    std::optional<qubit::QubitScenario> qubit_scenario;
    std::optional<grid::GridScenario> grid_scenario;
    std::string format = "json"; // "json" or "csv-summary"
};

namespace detail {

inline void reject_unknown(const json& obj, const std::string& where,
                           std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigInvalid("unknown field \"" + it.key() + "\" in " + where);
    }
}

inline const json& require(const json& obj, const std::string& where, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end())
        throw ConfigInvalid("missing field \"" + std::string(key) + "\" in " + where);
    return *it;
}

inline std::string get_string(const json& obj, const std::string& where, const char* key) {
    const json& v = require(obj, where, key);
    if (!v.is_string())
        throw ConfigInvalid("field \"" + std::string(key) + "\" in " + where +
                            " must be a string");
    return v.get<std::string>();
}

inline double get_number(const json& obj, const std::string& where, const char* key,
                         std::optional<double> fallback = std::nullopt) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        if (fallback) return *fallback;
        throw ConfigInvalid("missing field \"" + std::string(key) + "\" in " + where);
    }
    if (!it->is_number())
        throw ConfigInvalid("field \"" + std::string(key) + "\" in " + where +
                            " must be a number");
    return it->get<double>();
}

inline Index get_int(const json& obj, const std::string& where, const char* key,
                     std::optional<Index> fallback = std::nullopt) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        if (fallback) return *fallback;
        throw ConfigInvalid("missing field \"" + std::string(key) + "\" in " + where);
    }
    if (!it->is_number_integer())
        throw ConfigInvalid("field \"" + std::string(key) + "\" in " + where +
                            " must be an integer");
    return it->get<Index>();
}

inline std::vector<double> get_real_array(const json& obj, const std::string& where,
                                          const char* key,
                                          std::optional<std::size_t> length = std::nullopt) {
    const json& v = require(obj, where, key);
    if (!v.is_array())
        throw ConfigInvalid("field \"" + std::string(key) + "\" in " + where +
                            " must be an array of numbers");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number())
            throw ConfigInvalid("field \"" + std::string(key) + "\" in " + where +
                                " must be an array of numbers");
        out[i] = v[i].get<double>();
    }
    if (length && out.size() != *length)
        throw ConfigInvalid("field \"" + std::string(key) + "\" in " + where +
                            " has the wrong length");
    return out;
}

inline grid::Wavepacket parse_wavepacket(const json& obj, const std::string& where) {
    if (!obj.is_object()) throw ConfigInvalid(where + " must be an object");
    grid::Wavepacket w;
    w.kind = get_string(obj, where, "kind");
    if (w.kind == "point") {
        reject_unknown(obj, where, {"kind", "label"});
        w.label = get_number(obj, where, "label");
    } else if (w.kind == "gaussian") {
        reject_unknown(obj, where, {"kind", "center", "width", "momentum"});
        w.center = get_number(obj, where, "center");
        w.width = get_number(obj, where, "width");
        w.momentum = get_number(obj, where, "momentum", 0.0);
        if (!(w.width > 0.0))
            throw ConfigInvalid("field \"width\" in " + where + " must be positive");
    } else if (w.kind == "plane_wave") {
        reject_unknown(obj, where, {"kind", "momentum"});
        w.momentum = get_number(obj, where, "momentum");
    } else if (w.kind == "samples") {
        reject_unknown(obj, where, {"kind", "re", "im"});
        const std::vector<double> re = get_real_array(obj, where, "re");
        std::vector<double> im(re.size(), 0.0);
        if (obj.contains("im")) im = get_real_array(obj, where, "im", re.size());
        w.samples.resize(static_cast<Index>(re.size()));
        for (std::size_t i = 0; i < re.size(); ++i)
            w.samples[static_cast<Index>(i)] = Cx(re[i], im[i]);
    } else {
        throw ConfigInvalid("field \"kind\" in " + where +
                            " must be one of point, gaussian, plane_wave, samples");
    }
    return w;
}

inline qubit::QubitScenario parse_qubit(const json& obj) {
    const std::string where = "\"qubit\"";
    if (!obj.is_object()) throw ConfigInvalid(where + " must be an object");
    reject_unknown(obj, where, {"case", "theta", "zeta", "zeta_prime"});
    qubit::QubitScenario sc;
    sc.case_id = get_string(obj, where, "case");
    if (sc.case_id != "a_prime" && sc.case_id != "b_prime" && sc.case_id != "c")
        throw ConfigInvalid("field \"case\" in " + where +
                            " must be one of a_prime, b_prime, c");
    sc.theta = get_number(obj, where, "theta", 0.0);
    sc.zeta = get_number(obj, where, "zeta", 0.0);
    sc.zeta_prime = get_number(obj, where, "zeta_prime", 0.0);
    return sc;
}

inline grid::GridScenario parse_grid(const json& obj, bool appendix) {
    const std::string where = appendix ? "\"grid\" (appendix)" : "\"grid\"";
    if (!obj.is_object()) throw ConfigInvalid(where + " must be an object");
    reject_unknown(obj, where,
                   {"case", "n", "h", "guard", "x_o", "y_o", "x_1", "x_2", "y_1", "y_2",
                    "theta", "zeta", "zeta_prime", "psi", "psi_b"});

    std::string case_id;
    if (appendix) {
        case_id = obj.contains("case") ? get_string(obj, where, "case") : "a";
        if (case_id != "a")
            throw ConfigInvalid("field \"case\" in " + where +
                                " must be \"a\" for the appendix scenario");
    } else {
        case_id = get_string(obj, where, "case");
        if (case_id != "a" && case_id != "a_prime" && case_id != "b" && case_id != "b_prime" &&
            case_id != "c" && case_id != "d")
            throw ConfigInvalid("field \"case\" in " + where +
                                " must be one of a, a_prime, b, b_prime, c, d");
    }

    const Index n = get_int(obj, where, "n");
    if (n <= 0 || n % 2 != 0)
        throw ConfigInvalid("field \"n\" in " + where + " must be a positive even integer");
    const double h = get_number(obj, where, "h", 1.0);
    if (!(h > 0.0)) throw ConfigInvalid("field \"h\" in " + where + " must be positive");
    const Index guard = get_int(obj, where, "guard", 2);
    if (guard < 0 || 2 * guard >= n)
        throw ConfigInvalid("field \"guard\" in " + where + " must satisfy 0 <= guard < n/2");

    grid::GridScenario sc;
    sc.case_id = case_id;
    sc.grid = grid::GridBasis(n, h);
    sc.guard = guard;
    sc.x_o = get_number(obj, where, "x_o", 0.0);
    sc.y_o = get_number(obj, where, "y_o", 0.0);
    sc.x_1 = get_number(obj, where, "x_1", 0.0);
    sc.x_2 = get_number(obj, where, "x_2", 0.0);
    sc.y_1 = get_number(obj, where, "y_1", 0.0);
    sc.y_2 = get_number(obj, where, "y_2", 0.0);
    sc.theta = get_number(obj, where, "theta", 0.0);
    sc.zeta = get_number(obj, where, "zeta", 0.0);
    sc.zeta_prime = get_number(obj, where, "zeta_prime", 0.0);

    // psi is the case's wavepacket: the observed factor for (a) and (b), the
    // frame factor for (d). The closed-label cases build their own states.
    const bool needs_psi = case_id == "a" || case_id == "b" || case_id == "d";
    if (needs_psi) {
        sc.psi = parse_wavepacket(require(obj, where, "psi"), "\"psi\"");
    } else if (obj.contains("psi")) {
        throw ConfigInvalid("field \"psi\" in " + where + " is not used by case " + case_id);
    }
    if (obj.contains("psi_b")) {
        if (case_id != "a")
            throw ConfigInvalid("field \"psi_b\" in " + where + " is only used by case a");
        sc.psi_b = parse_wavepacket(obj["psi_b"], "\"psi_b\"");
    }
    if (appendix && !sc.psi_b)
        throw ConfigInvalid("missing field \"psi_b\" in " + where +
                            "; the appendix scenario needs a smooth frame wavepacket");
    return sc;
}

} // namespace detail

inline RunConfig parse_run_config(const json& root) {
    if (!root.is_object()) throw ConfigInvalid("config root must be a JSON object");
    RunConfig cfg;
    cfg.scenario = detail::get_string(root, "the config root", "scenario");

    if (cfg.scenario == "qubit") {
        detail::reject_unknown(root, "the config root", {"scenario", "qubit", "output"});
        cfg.qubit_scenario = detail::parse_qubit(detail::require(root, "the config root", "qubit"));
    } else if (cfg.scenario == "grid" || cfg.scenario == "grid-appendix") {
        detail::reject_unknown(root, "the config root", {"scenario", "grid", "output"});
        cfg.grid_scenario = detail::parse_grid(detail::require(root, "the config root", "grid"),
                                               cfg.scenario == "grid-appendix");
    } else {
        throw ConfigInvalid("field \"scenario\" in the config root must be one of "
                            "qubit, grid, grid-appendix");
    }

    if (root.contains("output")) {
        const json& out = root["output"];
        if (!out.is_object()) throw ConfigInvalid("\"output\" must be an object");
        detail::reject_unknown(out, "\"output\"", {"format"});
        cfg.format = detail::get_string(out, "\"output\"", "format");
        if (cfg.format != "json" && cfg.format != "csv-summary")
            throw ConfigInvalid("field \"format\" in \"output\" must be json or csv-summary");
    }
    return cfg;
}

inline RunConfig parse_run_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_run_config(root);
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoFailure("cannot read config file: " + path);
    return parse_run_config_text(buf.str());
}

} // namespace ncval::config
