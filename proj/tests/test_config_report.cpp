// Config parsing, report serialization and the command-line contract. The
// round-trip tests parse the emitted JSON back with an unrelated parser and
// demand exact recovery of every number (the writer prints 17 significant
// digits, which is lossless for doubles). CLI tests exercise the installed
// binary as a subprocess.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "ncval/config.hpp"
#include "ncval/report.hpp"

using namespace ncval;
using nlohmann::json;

namespace {

struct ProcResult {
    int status = -1;
    std::string out;
};

ProcResult run_shell(const std::string& cmd) {
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    REQUIRE(pipe != nullptr);
    ProcResult r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int rc = pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

ProcResult run_cli(const std::string& args) {
    return run_shell(std::string(NCVAL_CLI_PATH) + " " + args);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    REQUIRE(f.good());
    f << text;
}

const std::string kQubitConfig = R"({
  "scenario": "qubit",
  "qubit": {"case": "c", "theta": 1.2, "zeta": 0.4}
})";

} // namespace

TEST_CASE("run configs parse into scenarios", "[config]") {
    const auto cfg = config::parse_run_config_text(kQubitConfig);
    REQUIRE(cfg.scenario == "qubit");
    REQUIRE(cfg.qubit_scenario.has_value());
    REQUIRE(cfg.qubit_scenario->case_id == "c");
    REQUIRE(cfg.qubit_scenario->theta == 1.2);
    REQUIRE(cfg.format == "json");

    const auto grid_cfg = config::parse_run_config_text(R"({
      "scenario": "grid",
      "grid": {
        "case": "a", "n": 64, "h": 0.5, "x_o": 1.5,
        "psi": {"kind": "gaussian", "center": 0.0, "width": 2.0}
      },
      "output": {"format": "csv-summary"}
    })");
    REQUIRE(grid_cfg.grid_scenario.has_value());
    REQUIRE(grid_cfg.grid_scenario->grid.n == 64);
    REQUIRE(grid_cfg.grid_scenario->psi.kind == "gaussian");
    REQUIRE(grid_cfg.format == "csv-summary");
}

TEST_CASE("config rejection names the offending field", "[config]") {
    const auto expect_reject = [](const std::string& text, const std::string& needle) {
        try {
            (void)config::parse_run_config_text(text);
            FAIL("config accepted: " << text);
        } catch (const ConfigInvalid& e) {
            INFO(e.what());
            REQUIRE(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    expect_reject(R"({"qubit": {"case": "c"}})", "scenario");
    expect_reject(R"({"scenario": "warp"})", "scenario");
    expect_reject(R"({"scenario": "qubit", "qubit": {"case": "c", "tilt": 1}})", "tilt");
    expect_reject(R"({"scenario": "qubit", "qubit": {"case": "c"}, "extra": 1})", "extra");
    expect_reject(R"({"scenario": "qubit", "qubit": {"case": "q"}})", "case");
    expect_reject(R"({"scenario": "qubit", "qubit": {"case": "c", "theta": "x"}})", "theta");
    expect_reject(R"({"scenario": "grid", "grid": {"case": "a", "n": 63, "x_o": 0,
                      "psi": {"kind": "point", "label": 0}}})", "n");
    // psi belongs only to the cases that consume it
    expect_reject(R"({"scenario": "grid", "grid": {"case": "c", "n": 64, "x_1": 0, "x_2": 1,
                      "y_o": 0, "theta": 1.0,
                      "psi": {"kind": "point", "label": 0}}})", "psi");
    // the momentum study needs the smooth frame packet
    expect_reject(R"({"scenario": "grid-appendix", "grid": {"case": "a", "n": 128, "x_o": 0,
                      "psi": {"kind": "plane_wave", "momentum": 0.2}}})", "psi_b");
    expect_reject(R"({"scenario": "qubit", "qubit": {"case": "c"},
                      "output": {"format": "yaml"}})", "format");
    expect_reject("{nope", "not valid JSON");
    expect_reject(R"({"scenario": "grid", "grid": {"case": "a", "n": 64, "x_o": 0,
                      "psi": {"kind": "gaussian", "center": 0, "width": 2, "charm": 1}}})",
                  "charm");
}

TEST_CASE("emitted JSON parses back to the same report", "[report]") {
    qubit::QubitScenario sc;
    sc.case_id = "c";
    sc.theta = 0.8;
    sc.zeta = 5.0;
    const ScenarioReport rep = qubit::run_qubit_case(sc);
    const std::string text = emit_json(rep);

    const json j = json::parse(text); // throws on malformed output
    REQUIRE(j["scenario_id"] == rep.scenario_id);
    REQUIRE(j["all_pass"] == rep.all_pass());
    REQUIRE(j["checks"].size() == rep.checks.size());
    for (std::size_t i = 0; i < rep.checks.size(); ++i) {
        const auto& jc = j["checks"][i];
        REQUIRE(jc["name"] == rep.checks[i].name);
        REQUIRE(jc["error"].get<double>() == rep.checks[i].error); // exact round trip
        REQUIRE(jc["tolerance"].get<double>() == rep.checks[i].tolerance);
        REQUIRE(jc["pass"] == rep.checks[i].pass);
    }
    REQUIRE(j["nc_values"].size() == rep.values.size());
    for (std::size_t i = 0; i < rep.values.size(); ++i) {
        const auto& jv = j["nc_values"][i];
        REQUIRE(jv["observable"] == rep.values[i].observable);
        REQUIRE(jv["f"]["re"].get<double>() == rep.values[i].f.real());
        REQUIRE(jv["f"]["im"].get<double>() == rep.values[i].f.imag());
        const auto re = jv["V"]["re"];
        for (Index k = 0; k < rep.values[i].V.size(); ++k)
            REQUIRE(re[static_cast<std::size_t>(k)].get<double>() ==
                    rep.values[i].V[k].real());
    }
    REQUIRE(j["parameters"]["theta"].get<double>() == 0.8);
    REQUIRE_FALSE(j.contains("wall_seconds")); // volatile field stays out by default

    // identical inputs give byte-identical output
    REQUIRE(emit_json(qubit::run_qubit_case(sc)) == text);
}

TEST_CASE("csv summary has one row per check", "[report]") {
    qubit::QubitScenario sc;
    sc.case_id = "a_prime";
    sc.theta = 0.4;
    const ScenarioReport rep = qubit::run_qubit_case(sc);
    const std::string csv = emit_csv(rep);

    std::size_t rows = 0;
    for (char ch : csv)
        if (ch == '\n') ++rows;
    REQUIRE(rows == rep.checks.size() + 1);
    REQUIRE(csv.rfind("scenario_id,check,error,tolerance,pass\n", 0) == 0);
    REQUIRE(csv.find("qubit-a_prime,final-norm,") != std::string::npos);
}

TEST_CASE("error documents are machine parsable", "[report]") {
    const json j = json::parse(error_json("ConfigInvalid", "bad \"field\"", "run cfg.json"));
    REQUIRE(j["error"]["code"] == "ConfigInvalid");
    REQUIRE(j["error"]["message"] == "bad \"field\"");
    REQUIRE(j["error"]["context"] == "run cfg.json");
}

TEST_CASE("cli run emits deterministic reports and honest exit codes", "[cli]") {
    write_file("tmp_cfg_qubit.json", kQubitConfig);

    const ProcResult first = run_cli("run tmp_cfg_qubit.json");
    REQUIRE(first.status == 0);
    const json j = json::parse(first.out);
    REQUIRE(j["scenario_id"] == "qubit-c");
    REQUIRE(j["all_pass"] == true);

    const ProcResult second = run_cli("run tmp_cfg_qubit.json");
    REQUIRE(second.out == first.out); // byte identical across runs

    const ProcResult csv = run_cli("run tmp_cfg_qubit.json --format csv-summary");
    REQUIRE(csv.status == 0);
    REQUIRE(csv.out.rfind("scenario_id,check,error,tolerance,pass\n", 0) == 0);

    const ProcResult to_file = run_cli("run tmp_cfg_qubit.json --out tmp_report.json");
    REQUIRE(to_file.status == 0);
    std::ifstream f("tmp_report.json", std::ios::binary);
    const std::string from_file((std::istreambuf_iterator<char>(f)),
                                std::istreambuf_iterator<char>());
    REQUIRE(from_file == first.out);

    std::remove("tmp_cfg_qubit.json");
    std::remove("tmp_report.json");
}

TEST_CASE("cli failure paths return errors, not partial reports", "[cli]") {
    write_file("tmp_cfg_bad.json", R"({"scenario": "qubit", "qubit": {"case": "c", "tilt": 1}})");

    const ProcResult bad = run_cli("run tmp_cfg_bad.json --out tmp_should_not_exist.json");
    REQUIRE(bad.status == 2);
    const json j = json::parse(bad.out);
    REQUIRE(j["error"]["code"] == "ConfigInvalid");
    REQUIRE(j["error"]["message"].get<std::string>().find("tilt") != std::string::npos);
    std::ifstream ghost("tmp_should_not_exist.json");
    REQUIRE_FALSE(ghost.good());

    const ProcResult missing = run_cli("run tmp_no_such_file.json");
    REQUIRE(missing.status == 2);
    REQUIRE(json::parse(missing.out)["error"]["code"] == "IoFailure");

    const ProcResult usage = run_cli("run");
    REQUIRE(usage.status != 0);

    const ProcResult suite = run_cli("verify warp-core");
    REQUIRE(suite.status == 2);
    REQUIRE(json::parse(suite.out)["error"]["code"] == "UnknownSuite");

    std::remove("tmp_cfg_bad.json");
}

TEST_CASE("cli verify honors the seed chain", "[cli]") {
    // fast suite invocation: few draws, small dimensions
    const std::string args = "verify ncvalue-core --draws 2 --dims 2..3";

    // default seed is 42
    const ProcResult plain = run_cli(args);
    REQUIRE(plain.status == 0);
    REQUIRE(plain.out.find("seed 42") != std::string::npos);

    // environment overrides the default
    const ProcResult env7 =
        run_shell("NCVAL_QRF_SEED=7 " + std::string(NCVAL_CLI_PATH) + " " + args);
    REQUIRE(env7.status == 0);
    REQUIRE(env7.out.find("seed 7") != std::string::npos);

    // explicit flag beats the environment
    const ProcResult flag7 =
        run_shell("NCVAL_QRF_SEED=9 " + std::string(NCVAL_CLI_PATH) + " " + args + " --seed 7");
    REQUIRE(flag7.status == 0);
    REQUIRE(flag7.out.find("seed 7") != std::string::npos);

    // a garbage environment seed is a hard error
    const ProcResult bad =
        run_shell("NCVAL_QRF_SEED=banana " + std::string(NCVAL_CLI_PATH) + " " + args);
    REQUIRE(bad.status == 2);
    REQUIRE(json::parse(bad.out)["error"]["code"] == "ConfigInvalid");
}

TEST_CASE("cli verify rejects malformed dimension ranges", "[cli]") {
    const ProcResult bad = run_cli("verify ncvalue-core --dims nope");
    REQUIRE(bad.status == 2);
    REQUIRE(json::parse(bad.out)["error"]["code"] == "BadParameters");
}
