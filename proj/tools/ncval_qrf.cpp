// Command-line front end: runs scenario configs into JSON/CSV reports and
// drives the property-verification suites.
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 error (bad config,
// bad usage, module error). Errors print a machine-parsable JSON object with
// an "error" field on stdout; timing always goes to stderr.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncval/config.hpp"
#include "ncval/report.hpp"
#include "ncval/verify.hpp"

namespace {

using ncval::ScenarioReport;

struct RunArgs {
    std::string config_path;
    std::string out_path;
    std::string format; // empty: take the config's choice (default json)
    bool timings = false;
};

struct VerifyArgs {
    std::string suite;
    std::string dims;
    int draws = 200;
    std::uint64_t seed = 42;
    bool seed_given = false;
    ncval::Index grid_n = 0;
};

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::uint64_t seed_from_environment(std::uint64_t fallback) {
    const char* env = std::getenv("NCVAL_QRF_SEED");
    if (!env || !*env) return fallback;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
        throw ncval::ConfigInvalid("environment variable NCVAL_QRF_SEED is not an integer");
    return static_cast<std::uint64_t>(v);
}

void parse_dims(const std::string& text, ncval::verify::VerifyOptions& opt) {
    const auto pos = text.find("..");
    long lo = 0, hi = 0;
    bool ok = pos != std::string::npos && pos > 0 && pos + 2 < text.size();
    if (ok) {
        char* end = nullptr;
        const std::string a = text.substr(0, pos), b = text.substr(pos + 2);
        lo = std::strtol(a.c_str(), &end, 10);
        ok = end && *end == '\0';
        hi = std::strtol(b.c_str(), &end, 10);
        ok = ok && end && *end == '\0';
    }
    if (!ok || lo < 1 || hi < lo)
        throw ncval::BadParameters("--dims must look like LO..HI with 1 <= LO <= HI");
    opt.dim_lo = lo;
    opt.dim_hi = hi;
}

int do_run(const RunArgs& args, std::string& context) {
    const auto t0 = std::chrono::steady_clock::now();
    const ncval::config::RunConfig cfg = ncval::config::load_run_config(args.config_path);

    ScenarioReport rep;
    if (cfg.qubit_scenario) {
        context = "scenario qubit-" + cfg.qubit_scenario->case_id;
        rep = ncval::qubit::run_qubit_case(*cfg.qubit_scenario);
    } else {
        context = "scenario " + cfg.scenario + "-" + cfg.grid_scenario->case_id;
        rep = ncval::grid::run_grid_case(*cfg.grid_scenario);
        if (cfg.scenario == "grid-appendix") {
            rep.scenario_id = "grid-appendix";
            for (auto& extra : ncval::grid::appendix_momentum_checks(*cfg.grid_scenario)) {
                bool seen = false;
                for (const auto& c : rep.checks) seen = seen || c.name == extra.name;
                if (!seen) rep.checks.push_back(std::move(extra));
            }
        }
    }

    const double wall = elapsed_seconds(t0);
    if (args.timings) rep.wall_seconds = wall;

    const std::string format = !args.format.empty() ? args.format : cfg.format;
    const std::string payload =
        format == "json" ? ncval::emit_json(rep) : ncval::emit_csv(rep);
    if (!args.out_path.empty()) {
        std::ofstream out(args.out_path, std::ios::binary | std::ios::trunc);
        if (!out) throw ncval::IoFailure("cannot open output file: " + args.out_path);
        out << payload;
        out.flush();
        if (!out) throw ncval::IoFailure("cannot write output file: " + args.out_path);
    } else {
        std::cout << payload;
    }
    std::fprintf(stderr, "wall-time: %.3f s\n", wall);
    return rep.all_pass() ? 0 : 1;
}

int do_verify(const VerifyArgs& args) {
    ncval::verify::VerifyOptions opt;
    if (!args.dims.empty()) parse_dims(args.dims, opt);
    opt.draws = args.draws;
    opt.seed = args.seed_given ? args.seed : seed_from_environment(42);
    opt.grid_n = args.grid_n;

    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = ncval::verify::run_suite(args.suite, opt);

    std::size_t failed = 0;
    for (const auto& r : rows) {
        if (!r.pass) ++failed;
        std::printf("[%s] %s %s  max-error %.6e  tolerance %.6e%s%s\n",
                    r.pass ? "PASS" : "FAIL", r.suite.c_str(), r.name.c_str(), r.max_error,
                    r.tolerance, r.flag.empty() ? "" : "  flag ", r.flag.c_str());
    }
    std::printf("%zu properties, %zu passed, %zu failed (suite %s, seed %llu)\n", rows.size(),
                rows.size() - failed, failed, args.suite.c_str(),
                static_cast<unsigned long long>(opt.seed));
    std::fprintf(stderr, "wall-time: %.3f s\n", elapsed_seconds(t0));
    return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-frame scenario runner and property verifier"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run_cmd = app.add_subcommand("run", "execute a scenario config and emit a report");
    run_cmd->add_option("config", run_args.config_path, "scenario config file (JSON)")->required();
    run_cmd->add_option("--out", run_args.out_path, "write the report to this path (default stdout)");
    run_cmd->add_option("--format", run_args.format, "report format")
        ->check(CLI::IsMember({"json", "csv-summary"}));
    run_cmd->add_flag("--timings", run_args.timings,
                      "include wall_seconds in the report (off keeps reports byte-identical)");

    VerifyArgs verify_args;
    CLI::App* verify_cmd = app.add_subcommand("verify", "run a property suite");
    verify_cmd
        ->add_option("suite", verify_args.suite,
                     "one of ncvalue-core, qubit, grid, appendix, all")
        ->required();
    verify_cmd->add_option("--dims", verify_args.dims,
                           "dimension range LO..HI for the randomized calculus draws");
    verify_cmd->add_option("--draws", verify_args.draws, "randomized draws per property");
    CLI::Option* seed_opt =
        verify_cmd->add_option("--seed", verify_args.seed,
                               "RNG seed (overrides NCVAL_QRF_SEED; default 42)");
    verify_cmd->add_option("--grid-n", verify_args.grid_n,
                           "lattice size for the grid (>= 64) and appendix (>= 128) suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() != 0)
            std::cout << ncval::error_json("UsageError", e.what(), "command line");
        return app.exit(e);
    }
    verify_args.seed_given = seed_opt->count() > 0;

    std::string context = "startup";
    try {
        if (run_cmd->parsed()) {
            context = "run " + run_args.config_path;
            return do_run(run_args, context);
        }
        context = "verify " + verify_args.suite;
        return do_verify(verify_args);
    } catch (const ncval::Error& e) {
        std::cout << ncval::error_json(e.code(), e.what(), context);
        std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cout << ncval::error_json("InternalError", e.what(), context);
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
