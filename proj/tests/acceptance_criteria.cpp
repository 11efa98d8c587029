// Acceptance gate: nine go/no-go criteria, one line each. Tolerances and
// time budgets are pinned here so a loosened suite cannot slip through, and
// the expected numbers are recomputed locally where that is cheap. Exit code
// is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "ncval/grid.hpp"
#include "ncval/qubit.hpp"
#include "ncval/verify.hpp"

using namespace ncval;
using verify::PropertyResult;

namespace {

int g_failures = 0;

void report(int index, bool pass, const std::string& label, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", index, label.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const PropertyResult* find_row(const std::vector<PropertyResult>& rows, const std::string& name) {
    for (const auto& r : rows)
        if (r.name == name) return &r;
    return nullptr;
}

// a named row must exist, pass, and be held to at least the pinned tolerance
bool row_ok(const std::vector<PropertyResult>& rows, const std::string& name, double pinned_tol,
            std::string& why) {
    const PropertyResult* r = find_row(rows, name);
    if (!r) {
        why += " missing:" + name;
        return false;
    }
    if (r->tolerance > pinned_tol) {
        why += " loose:" + name;
        return false;
    }
    if (!r->pass) {
        why += " failed:" + name;
        return false;
    }
    return true;
}

bool all_rows_pass(const std::vector<PropertyResult>& rows, std::string& why) {
    bool ok = true;
    for (const auto& r : rows)
        if (!r.pass) {
            ok = false;
            why += " failed:" + r.name;
        }
    return ok;
}

void criterion_1() {
    const double thetas[] = {0.25, 0.80, 1.35, 1.90, 2.75};
    const double zetas[] = {0.10, 1.40, 2.70, 4.00, 5.30};
    const double pinned = 1e-12;
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    int points = 0;
    bool clean = true;
    std::string why;
    for (double th : thetas)
        for (double ze : zetas) {
            qubit::QubitScenario sc;
            sc.case_id = "c";
            sc.theta = th;
            sc.zeta = ze;
            const ScenarioReport rep = qubit::run_qubit_case(sc);
            ++points;
            bool saw_golden = false;
            for (const auto& c : rep.checks) {
                if (c.name.rfind("golden-", 0) == 0) {
                    saw_golden = true;
                    worst = std::max(worst, c.error);
                }
                if (!c.pass) {
                    clean = false;
                    why += " failed:" + c.name;
                }
            }
            if (!saw_golden) {
                clean = false;
                why += " no-goldens";
            }
        }
    const double wall = seconds_since(t0);
    const bool pass = clean && points == 25 && worst <= pinned && wall < 1.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "25 angle points, worst golden error %.3e vs %.0e, %.2fs of 1s budget%s", worst,
                  pinned, wall, why.c_str());
    report(1, pass, "correlated-qubit golden values across the angle sweep", detail);
}

void criterion_2() {
    const double pinned = 1e-12;
    const auto table = qubit::pushforward_table_check();
    double worst = 0.0;
    for (const auto& e : table) worst = std::max(worst, e.error);
    const bool pass = table.size() == 6 && worst < pinned;
    char detail[120];
    std::snprintf(detail, sizeof(detail), "%zu generator images, worst error %.3e vs %.0e",
                  table.size(), worst, pinned);
    report(2, pass, "single-qubit generator pushforward table", detail);
}

std::vector<PropertyResult> g_core_rows; // shared between criteria 3 and 4

void criterion_3() {
    verify::VerifyOptions opt; // dims 2..16, 200 draws, seed 42
    const auto t0 = std::chrono::steady_clock::now();
    g_core_rows = verify::verify_ncvalue_core(opt);
    const double wall = seconds_since(t0);

    std::string why;
    bool ok = true;
    for (const char* name :
         {"star-homomorphism-f", "star-homomorphism-V", "uncertainty-identity",
          "eigenstate-V-zero", "basis-covariance-f", "basis-covariance-V",
          "basis-variance-invariance", "classical-scalar-value", "classical-scalar-star",
          "linear-combination-f", "linear-combination-V"})
        ok = row_ok(g_core_rows, name, 1e-10, why) && ok;
    ok = all_rows_pass(g_core_rows, why) && ok;
    const bool pass = ok && wall < 10.0;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "200 draws over dimensions 2..16 at seed 42, tol 1e-10, %.2fs of 10s budget%s",
                  wall, why.c_str());
    report(3, pass, "randomized value-calculus properties", detail);
}

void criterion_4() {
    std::string why;
    bool ok = row_ok(g_core_rows, "ktilde-reconstruction", 1e-10, why);
    ok = row_ok(g_core_rows, "ktilde-finite-difference", 1e-5, why) && ok;
    double rec = -1.0, fd = -1.0;
    if (const auto* r = find_row(g_core_rows, "ktilde-reconstruction")) rec = r->max_error;
    if (const auto* r = find_row(g_core_rows, "ktilde-finite-difference")) fd = r->max_error;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "100 draws: rebuild error %.3e vs 1e-10, curvature-vs-differences %.3e vs 1e-5%s",
                  rec, fd, why.c_str());
    report(4, ok, "curvature block reconstructs the operator and matches finite differences",
           detail);
}

void criterion_5() {
    verify::VerifyOptions opt;
    opt.grid_n = 64;
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = verify::verify_grid(opt);
    const double wall = seconds_since(t0);

    std::string why;
    bool ok = all_rows_pass(rows, why);
    ok = row_ok(rows, "unitarity-permutation-roundtrip", 1e-15, why) && ok;
    ok = row_ok(rows, "pushforward-xB-wrap-safe", 1e-12, why) && ok;
    ok = row_ok(rows, "pushforward-xC-wrap-safe", 1e-12, why) && ok;
    ok = row_ok(rows, "case-a/invariance-f-xB", 1e-10, why) && ok;
    ok = row_ok(rows, "case-a/invariance-V-xB", 1e-10, why) && ok;
    ok = row_ok(rows, "case-d/correlated-V-cancellation", 1e-12, why) && ok;
    ok = row_ok(rows, "case-d/final-V-xC-zero", 1e-10, why) && ok;
    const bool pass = ok && wall < 5.0;
    char detail[200];
    std::snprintf(detail, sizeof(detail), "%zu lattice properties at n=64, %.2fs of 5s budget%s",
                  rows.size(), wall, why.c_str());
    report(5, pass, "lattice position hop identities", detail);
}

void criterion_6() {
    verify::VerifyOptions opt;
    opt.grid_n = 256;
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = verify::verify_appendix(opt);
    const double wall = seconds_since(t0);

    std::string why;
    bool ok = all_rows_pass(rows, why);
    ok = row_ok(rows, "invariance-f-pC", 1e-9, why) && ok;
    ok = row_ok(rows, "invariance-V-pC", 1e-9, why) && ok;
    ok = row_ok(rows, "sum-rule-f-pA", 1e-6, why) && ok;
    ok = row_ok(rows, "sum-rule-V-pA", 1e-6, why) && ok;
    ok = row_ok(rows, "commutator-expectation", 1e-3, why) && ok;
    const bool pass = ok && wall < 30.0;
    char detail[200];
    std::snprintf(detail, sizeof(detail), "%zu momentum properties at n=256, %.2fs of 30s budget%s",
                  rows.size(), wall, why.c_str());
    report(6, pass, "lattice momentum hop identities on the wide packet", detail);
}

void criterion_7() {
    std::string why;
    bool ok = true;

    qubit::QubitScenario qc;
    qc.case_id = "c";
    qc.theta = 1.2;
    qc.zeta = 0.4;
    const ScenarioReport rc = qubit::run_qubit_case(qc);
    if (!(rc.ranks.size() == 2 && rc.ranks[0].rank == 2 && rc.ranks[1].rank == 1)) {
        ok = false;
        why += " qubit-c";
    }

    qubit::QubitScenario qb;
    qb.case_id = "b_prime";
    qb.theta = 1.1;
    qb.zeta = 0.7;
    qb.zeta_prime = 2.3;
    const ScenarioReport rb = qubit::run_qubit_case(qb);
    if (!(rb.ranks.size() == 2 && rb.ranks[1].rank == 2)) {
        ok = false;
        why += " qubit-b_prime";
    }

    grid::GridScenario gd;
    gd.case_id = "d";
    gd.grid = grid::GridBasis{64, 1.0};
    gd.y_o = 3.0;
    grid::Wavepacket psi;
    psi.kind = "gaussian";
    psi.center = 0.0;
    psi.width = 2.0;
    gd.psi = psi;
    const ScenarioReport rd = grid::run_grid_case(gd);
    const Vector packet = grid::build_packet(gd.grid, psi);
    int support = 0;
    const double cut = 1e-10 * packet.cwiseAbs().maxCoeff();
    for (Index j = 0; j < packet.size(); ++j)
        if (std::abs(packet[j]) > cut) ++support;
    if (!(rd.ranks.size() == 2 && rd.ranks[0].rank == support && rd.ranks[1].rank == 1)) {
        ok = false;
        why += " grid-d";
    }

    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "qubit c %d/%d, b' final %d, lattice d %d vs support %d and %d%s",
                  rc.ranks[0].rank, rc.ranks[1].rank, rb.ranks[1].rank, rd.ranks[0].rank, support,
                  rd.ranks[1].rank, why.c_str());
    report(7, ok, "Schmidt ranks across the hop", detail);
}

void criterion_8() {
    qubit::QubitScenario sc;
    sc.case_id = "c";
    sc.theta = 1.1;
    sc.zeta = 0.3;
    const ScenarioReport rep = qubit::run_qubit_case(sc);
    const CheckResult* row = nullptr;
    for (const auto& c : rep.checks)
        if (c.flag == "paper-discrepancy") row = &c;
    const bool has_numbers = row && row->details.find("computed=") != std::string::npos &&
                             row->details.find("printed=") != std::string::npos;
    const bool pass = row && row->pass && has_numbers && rep.all_pass();
    std::string detail = row ? "flagged row '" + row->name + "' with " + row->details
                             : std::string("flag row missing");
    if (detail.size() > 150) detail = detail.substr(0, 150);
    report(8, pass, "documented spread mismatch is flagged with both numbers, not failed", detail);
}

void criterion_9() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string how;
#ifdef NCVAL_CLI_PATH
    const std::string cmd = std::string(NCVAL_CLI_PATH) + " verify all >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    pass = rc != -1 && WIFEXITED(rc) && WEXITSTATUS(rc) == 0;
    how = "subprocess";
#else
    const auto rows = verify::run_suite("all", verify::VerifyOptions{});
    pass = verify::all_pass(rows);
    how = "in-process";
#endif
    const double wall = seconds_since(t0);
    pass = pass && wall < 60.0;
    char detail[120];
    std::snprintf(detail, sizeof(detail), "full sweep (%s) %.2fs of 60s budget", how.c_str(),
                  wall);
    report(9, pass, "complete verification sweep inside the time budget", detail);
}

} // namespace

int main() {
    try {
        criterion_1();
        criterion_2();
        criterion_3();
        criterion_4();
        criterion_5();
        criterion_6();
        criterion_7();
        criterion_8();
        criterion_9();
    } catch (const std::exception& e) {
        std::printf("[FAIL] unexpected exception: %s\n", e.what());
        ++g_failures;
    }
    std::printf("%d of 9 criteria passed\n", 9 - g_failures);
    return g_failures;
}
