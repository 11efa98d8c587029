#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "ncval/layout.hpp"
#include "ncval/state.hpp"

namespace ncval {

// Report plumbing. The JSON writer is deliberately hand-rolled: the
// determinism contract is byte-identical output for identical inputs, with
// every floating value printed at 17 significant digits (lossless for IEEE
// doubles), and no third-party serializer guarantees that formatting.

struct CheckResult {
    std::string name;
    double error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string flag;    // empty, or an annotation such as "paper-discrepancy"
    std::string details; // optional free-form numbers backing the check
};

struct NCRecord {
    std::string observable;
    std::string side; // "initial", "final", "final-reexpressed", ...
    std::string basis_id;
    Cx f;
    Vector V;
    double variance = 0.0;
};

struct RankRecord {
    std::string name;
    Index rows = 0;
    Index cols = 0;
    int rank = 0;
};

struct StateSummary {
    std::string name;
    std::string basis_id;
    Index dim = 0;
    double norm = 0.0;
    std::vector<std::pair<Index, Cx>> support; // index-sorted samples above threshold
    bool truncated = false;
};

struct ScenarioReport {
    std::string scenario_id;
    std::string parameters_json = "{}"; // canonical echo; always a valid JSON object
    std::vector<StateSummary> states;
    std::vector<NCRecord> values;
    std::vector<RankRecord> ranks;
    std::vector<CheckResult> checks;
    std::optional<double> wall_seconds; // volatile; only present when explicitly requested

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

inline std::string json_complex(Cx v) {
    return "{\"re\":" + fmt17(v.real()) + ",\"im\":" + fmt17(v.imag()) + "}";
}

inline std::string json_vector_pair(const Vector& v) {
    std::string re = "[", im = "[";
    for (Index i = 0; i < v.size(); ++i) {
        if (i) {
            re += ',';
            im += ',';
        }
        re += fmt17(v[i].real());
        im += fmt17(v[i].imag());
    }
    return "{\"re\":" + re + "],\"im\":" + im + "]}";
}

// Compact state echo: samples above threshold, largest-magnitude first when
// capped, emitted in index order. Deterministic by construction.
inline StateSummary summarize_state(const std::string& name, const State& s,
                                    std::size_t cap = 4096, double threshold = 1e-14) {
    StateSummary out;
    out.name = name;
    out.basis_id = s.basis_id();
    out.dim = s.dim();
    out.norm = s.amplitudes.norm();
    std::vector<std::pair<Index, Cx>> entries;
    for (Index i = 0; i < s.dim(); ++i)
        if (std::abs(s.amplitudes[i]) > threshold) entries.emplace_back(i, s.amplitudes[i]);
    if (entries.size() > cap) {
        std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
            const double ma = std::abs(a.second), mb = std::abs(b.second);
            if (ma != mb) return ma > mb;
            return a.first < b.first;
        });
        entries.resize(cap);
        out.truncated = true;
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.support = std::move(entries);
    return out;
}

inline std::string emit_json(const ScenarioReport& r) {
    std::string j = "{";
    j += "\"scenario_id\":\"" + json_escape(r.scenario_id) + "\",";
    j += "\"parameters\":" + r.parameters_json + ",";
    j += "\"states\":[";
    for (std::size_t i = 0; i < r.states.size(); ++i) {
        const auto& s = r.states[i];
        if (i) j += ',';
        j += "{\"name\":\"" + json_escape(s.name) + "\",";
        j += "\"basis_id\":\"" + json_escape(s.basis_id) + "\",";
        j += "\"dim\":" + std::to_string(s.dim) + ",";
        j += "\"norm\":" + fmt17(s.norm) + ",";
        j += "\"truncated\":" + std::string(s.truncated ? "true" : "false") + ",";
        j += "\"support\":[";
        for (std::size_t k = 0; k < s.support.size(); ++k) {
            if (k) j += ',';
            j += "{\"index\":" + std::to_string(s.support[k].first) +
                 ",\"re\":" + fmt17(s.support[k].second.real()) +
                 ",\"im\":" + fmt17(s.support[k].second.imag()) + "}";
        }
        j += "]}";
    }
    j += "],";
    j += "\"nc_values\":[";
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        const auto& v = r.values[i];
        if (i) j += ',';
        j += "{\"observable\":\"" + json_escape(v.observable) + "\",";
        j += "\"side\":\"" + json_escape(v.side) + "\",";
        j += "\"basis_id\":\"" + json_escape(v.basis_id) + "\",";
        j += "\"f\":" + json_complex(v.f) + ",";
        j += "\"V\":" + json_vector_pair(v.V) + ",";
        j += "\"variance\":" + fmt17(v.variance) + "}";
    }
    j += "],";
    j += "\"ranks\":[";
    for (std::size_t i = 0; i < r.ranks.size(); ++i) {
        const auto& k = r.ranks[i];
        if (i) j += ',';
        j += "{\"name\":\"" + json_escape(k.name) + "\",\"rows\":" + std::to_string(k.rows) +
             ",\"cols\":" + std::to_string(k.cols) + ",\"rank\":" + std::to_string(k.rank) + "}";
    }
    j += "],";
    j += "\"checks\":[";
    for (std::size_t i = 0; i < r.checks.size(); ++i) {
        const auto& c = r.checks[i];
        if (i) j += ',';
        j += "{\"name\":\"" + json_escape(c.name) + "\",";
        j += "\"error\":" + fmt17(c.error) + ",";
        j += "\"tolerance\":" + fmt17(c.tolerance) + ",";
        j += "\"pass\":" + std::string(c.pass ? "true" : "false");
        if (!c.flag.empty()) j += ",\"flag\":\"" + json_escape(c.flag) + "\"";
        if (!c.details.empty()) j += ",\"details\":\"" + json_escape(c.details) + "\"";
        j += "}";
    }
    j += "],";
    if (r.wall_seconds) j += "\"wall_seconds\":" + fmt17(*r.wall_seconds) + ",";
    j += "\"all_pass\":" + std::string(r.all_pass() ? "true" : "false");
    j += "}\n";
    return j;
}

// One row per check.
inline std::string emit_csv(const ScenarioReport& r) {
    std::string out = "scenario_id,check,error,tolerance,pass\n";
    for (const auto& c : r.checks) {
        out += r.scenario_id;
        out += ',';
        out += c.name;
        out += ',';
        out += fmt17(c.error);
        out += ',';
        out += fmt17(c.tolerance);
        out += ',';
        out += c.pass ? "true" : "false";
        out += '\n';
    }
    return out;
}

// Machine-parsable error document for the CLI's failure paths.
inline std::string error_json(const std::string& code, const std::string& message,
                              const std::string& context = "") {
    std::string j = "{\"error\":{\"code\":\"" + json_escape(code) + "\",\"message\":\"" +
                    json_escape(message) + "\"";
    if (!context.empty()) j += ",\"context\":\"" + json_escape(context) + "\"";
    j += "}}\n";
    return j;
}

} // namespace ncval
