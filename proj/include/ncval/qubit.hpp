#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ncval/layout.hpp"
#include "ncval/ncvalue.hpp"
#include "ncval/operator.hpp"
#include "ncval/report.hpp"
#include "ncval/state.hpp"

namespace ncval::qubit {

inline const Matrix& pauli(int k) {
    static const std::array<Matrix, 4> sigma = [] {
        std::array<Matrix, 4> s;
        for (auto& m : s) m = Matrix::Zero(2, 2);
        s[0](0, 0) = 1;
        s[0](1, 1) = 1;
        s[1](0, 1) = 1;
        s[1](1, 0) = 1;
        s[2](0, 1) = Cx(0, -1);
        s[2](1, 0) = Cx(0, 1);
        s[3](0, 0) = 1;
        s[3](1, 1) = -1;
        return s;
    }();
    if (k < 0 || k > 3) throw BadParameters("pauli index must be 0..3");
    return sigma[static_cast<std::size_t>(k)];
}

// Observed system pair (B, C) described from frame A.
inline BasisLayout initial_layout() {
    return BasisLayout({frame_slot(Role::A), indexed_factor(Role::B, 2), indexed_factor(Role::C, 2)});
}

// Same pair described from frame B; the old frame A is now an active qubit.
inline BasisLayout final_layout() {
    return BasisLayout({indexed_factor(Role::A, 2), frame_slot(Role::B), indexed_factor(Role::C, 2)});
}

// Frame hop for two qubits. Columns are the images of the computational
// basis |b c⟩; rows index the final basis |a c⟩. The four columns are the
// normative content, so they are written out rather than derived.
inline Operator build_qubit_qrf_unitary(const BasisLayout& layout) {
    if (!(layout == initial_layout()))
        throw BadLayout("qubit frame hop needs layout [frame A | B:2 | C:2]");
    const double r = 1.0 / std::sqrt(2.0);
    Matrix m = Matrix::Zero(4, 4);
    m(2, 0) = r;
    m(3, 0) = r; // |00> -> (|10> + |11>)/sqrt2
    m(2, 1) = r;
    m(3, 1) = -r; // |01> -> (|10> - |11>)/sqrt2
    m(0, 2) = -r;
    m(1, 2) = r; // |10> -> (|01> - |00>)/sqrt2
    m(0, 3) = r;
    m(1, 3) = r; // |11> -> (|01> + |00>)/sqrt2
    return Operator::dense_mapping(layout, final_layout(), m);
}

// The same hop written as a map on amplitudes. Kept independent of the
// matrix above so the two can cross-check each other.
inline Vector coordinate_transform(const Vector& z) {
    if (z.size() != 4) throw DimensionMismatch("coordinate transform needs a 4-vector");
    const double r = 1.0 / std::sqrt(2.0);
    Vector zp(4);
    zp[0] = r * (z[3] - z[2]);
    zp[1] = r * (z[3] + z[2]);
    zp[2] = r * (z[0] + z[1]);
    zp[3] = r * (z[0] - z[1]);
    return zp;
}

struct PushforwardEntry {
    std::string name;
    double error;
};

// How each single-qubit generator transforms under the hop, as operators on
// the final basis. All six images are exact.
inline std::vector<PushforwardEntry> pushforward_table_check() {
    const BasisLayout li = initial_layout();
    const BasisLayout lf = final_layout();
    const Operator u = build_qubit_qrf_unitary(li);

    const auto on_b = [&](int k) { return operator_on_factor(Operator::dense(single_indexed_layout(Role::B, 2), pauli(k)), Role::B, li); };
    const auto on_c_i = [&](int k) { return operator_on_factor(Operator::dense(single_indexed_layout(Role::C, 2), pauli(k)), Role::C, li); };
    const auto target = [&](int ka, int kc, double sign) {
        return Operator::dense(lf, sign * kron(pauli(ka), pauli(kc)));
    };

    struct Row {
        std::string name;
        Operator src;
        Operator dst;
    };
    const std::vector<Row> rows = {
        {"sigma1_B -> sigma2_A.sigma2_C", on_b(1), target(2, 2, 1.0)},
        {"sigma2_B -> sigma1_A.sigma2_C", on_b(2), target(1, 2, 1.0)},
        {"sigma3_B -> -sigma3_A", on_b(3), target(3, 0, -1.0)},
        {"sigma1_C -> -sigma3_A.sigma3_C", on_c_i(1), target(3, 3, -1.0)},
        {"sigma2_C -> -sigma2_C", on_c_i(2), target(0, 2, -1.0)},
        {"sigma3_C -> -sigma3_A.sigma1_C", on_c_i(3), target(3, 1, -1.0)},
    };

    std::vector<PushforwardEntry> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        const Matrix got = conjugate(u, row.src).to_dense();
        out.push_back({row.name, max_abs_diff(got, row.dst.to_dense())});
    }
    return out;
}

// Two consecutive hops (with the role relabel between them) must agree with
// pushing every generator through the single-hop table twice. The targets
// below are that double image, worked out by hand:
//   sigma1_B -> -sigma1_A   sigma1_C -> -sigma1_C
//   sigma2_B -> -sigma2_A   sigma2_C ->  sigma2_C
//   sigma3_B ->  sigma3_A   sigma3_C -> -sigma3_C
inline double composition_roundtrip_error() {
    const BasisLayout li = initial_layout();
    const BasisLayout lf = final_layout();
    const Operator u = build_qubit_qrf_unitary(li);
    // Relabeling A<->B turns the final layout back into the initial one
    // without moving any amplitude, so it is an identity mapping between
    // the two layouts.
    const Operator relabel = Operator::dense_mapping(lf, li, Matrix::Identity(4, 4));
    const Operator hop2 = multiply(u, multiply(relabel, u));

    const auto src_b = [&](int k) { return operator_on_factor(Operator::dense(single_indexed_layout(Role::B, 2), pauli(k)), Role::B, li); };
    const auto src_c = [&](int k) { return operator_on_factor(Operator::dense(single_indexed_layout(Role::C, 2), pauli(k)), Role::C, li); };
    // explicit Matrix return: the product must not outlive the kron temporary
    const auto tgt = [&](int ka, int kc, double sign) -> Matrix {
        return sign * kron(pauli(ka), pauli(kc));
    };

    double worst = 0.0;
    const std::vector<std::pair<Operator, Matrix>> rows = {
        {src_b(1), tgt(1, 0, -1.0)}, {src_b(2), tgt(2, 0, -1.0)}, {src_b(3), tgt(3, 0, 1.0)},
        {src_c(1), tgt(0, 1, -1.0)}, {src_c(2), tgt(0, 2, 1.0)},  {src_c(3), tgt(0, 3, -1.0)},
    };
    for (const auto& [src, want] : rows) {
        const Matrix got = conjugate(hop2, src).to_dense();
        worst = std::max(worst, max_abs_diff(got, want));
    }
    return worst;
}

struct QubitScenario {
    std::string case_id; // "a_prime", "b_prime" or "c"
    double theta = 0.0;
    double zeta = 0.0;
    double zeta_prime = 0.0;
};

namespace detail {

inline void validate_scenario(const QubitScenario& sc) {
    if (sc.case_id != "a_prime" && sc.case_id != "b_prime" && sc.case_id != "c")
        throw BadParameters("unknown qubit case: " + sc.case_id);
    if (!(sc.theta >= 0.0 && sc.theta < M_PI))
        throw BadParameters("theta must lie in [0, pi)");
    const double two_pi = 2.0 * M_PI;
    if (!(sc.zeta >= 0.0 && sc.zeta < two_pi)) throw BadParameters("zeta must lie in [0, 2*pi)");
    if (!(sc.zeta_prime >= 0.0 && sc.zeta_prime < two_pi))
        throw BadParameters("zeta_prime must lie in [0, 2*pi)");
}

inline CheckResult check_of(const std::string& name, double error, double tol,
                            const std::string& flag = "", const std::string& details = "") {
    CheckResult c;
    c.name = name;
    c.error = error;
    c.tolerance = tol;
    c.pass = error <= tol;
    c.flag = flag;
    c.details = details;
    if (!flag.empty() && flag == "paper-discrepancy") c.pass = true; // documented, not failing
    return c;
}

} // namespace detail

// Runs one worked two-qubit scenario end to end: build the initial state,
// hop frames, record noncommutative values on both sides, re-express the
// final ones in the initial coordinates and check the invariances plus the
// per-case golden numbers.
inline ScenarioReport run_qubit_case(const QubitScenario& sc) {
    detail::validate_scenario(sc);
    const BasisLayout li = initial_layout();
    const BasisLayout lf = final_layout();
    const Cx c = std::polar(std::cos(sc.theta / 2.0), -sc.zeta / 2.0);
    const Cx s = std::polar(std::sin(sc.theta / 2.0), sc.zeta / 2.0);
    const Cx ez = std::polar(1.0, sc.zeta_prime);
    const double r = 1.0 / std::sqrt(2.0);

    // Initial amplitudes over |b c>.
    Vector z0(4);
    if (sc.case_id == "a_prime") {
        const State sb = basis_state(single_indexed_layout(Role::B, 2), 0);
        Vector phi(2);
        phi << c, s;
        const State scst = make_state(single_indexed_layout(Role::C, 2), phi, false);
        z0 = with_frame(tensor_states(sb, scst), Role::A).amplitudes;
    } else if (sc.case_id == "b_prime") {
        Vector bamp(2), camp(2);
        bamp << r, r * ez;
        camp << c, s;
        const State sb = make_state(single_indexed_layout(Role::B, 2), bamp, false);
        const State scst = make_state(single_indexed_layout(Role::C, 2), camp, false);
        z0 = with_frame(tensor_states(sb, scst), Role::A).amplitudes;
    } else {
        z0 << c, 0, 0, s;
    }
    const State initial = make_state(li, z0, false);

    const Operator u = build_qubit_qrf_unitary(li);
    const Operator uadj = u.adjoint();
    const State fin = apply(u, initial);

    ScenarioReport rep;
    rep.scenario_id = "qubit-" + sc.case_id;
    rep.parameters_json = "{\"case\":\"" + sc.case_id + "\",\"theta\":" + fmt17(sc.theta) +
                          ",\"zeta\":" + fmt17(sc.zeta) + ",\"zeta_prime\":" + fmt17(sc.zeta_prime) +
                          "}";
    rep.states.push_back(summarize_state("initial", initial));
    rep.states.push_back(summarize_state("final", fin));

    // Observables on each side of the hop.
    const Operator s3B_i = operator_on_factor(Operator::dense(single_indexed_layout(Role::B, 2), pauli(3)), Role::B, li);
    const Operator s3C_i = operator_on_factor(Operator::dense(single_indexed_layout(Role::C, 2), pauli(3)), Role::C, li);
    const Operator m3A_f = Operator::dense(lf, -kron(pauli(3), pauli(0)));
    const Operator s3C_f = operator_on_factor(Operator::dense(single_indexed_layout(Role::C, 2), pauli(3)), Role::C, lf);
    const Operator m3A1C_f = Operator::dense(lf, -kron(pauli(3), pauli(1)));

    const NCValue v_s3B_i = ncvalue_of(s3B_i, initial);
    const NCValue v_s3C_i = ncvalue_of(s3C_i, initial);
    const NCValue v_m3A_f = ncvalue_of(m3A_f, fin);
    const NCValue v_s3C_f = ncvalue_of(s3C_f, fin);
    const NCValue v_m3A1C_f = ncvalue_of(m3A1C_f, fin);

    // Pull the final-side values back into the initial coordinates.
    const NCValue r_m3A = reexpress(v_m3A_f, uadj);
    const NCValue r_m3A1C = reexpress(v_m3A1C_f, uadj);
    const NCValue r_s3C_f = reexpress(v_s3C_f, uadj);

    const auto push_value = [&rep](const std::string& obs, const std::string& side, const NCValue& v) {
        rep.values.push_back({obs, side, v.basis_id, v.f, v.V, uncertainty(v)});
    };
    push_value("sigma3_B", "initial", v_s3B_i);
    push_value("sigma3_C", "initial", v_s3C_i);
    push_value("-sigma3_A", "final", v_m3A_f);
    push_value("sigma3_C", "final", v_s3C_f);
    push_value("-sigma3_A.sigma1_C", "final", v_m3A1C_f);
    push_value("-sigma3_A", "final-reexpressed", r_m3A);
    push_value("-sigma3_A.sigma1_C", "final-reexpressed", r_m3A1C);
    push_value("sigma3_C", "final-reexpressed", r_s3C_f);

    auto& checks = rep.checks;
    checks.push_back(detail::check_of("final-norm", std::abs(fin.amplitudes.norm() - 1.0), 1e-12));
    checks.push_back(detail::check_of("coordinate-transform-match",
                                      max_abs_diff(fin.amplitudes, coordinate_transform(z0)), 1e-12));

    // Golden final amplitudes, written from the printed closed forms.
    Vector zf(4);
    if (sc.case_id == "a_prime") {
        zf << 0, 0, r * (c + s), r * (c - s);
    } else if (sc.case_id == "b_prime") {
        zf << -ez * (c - s) / 2.0, ez * (c + s) / 2.0, (c + s) / 2.0, (c - s) / 2.0;
    } else {
        zf << r * s, r * s, r * c, r * c;
    }
    checks.push_back(detail::check_of("printed-final-form", max_abs_diff(fin.amplitudes, zf), 1e-12));

    // Frame-change invariance of the noncommutative values: the initial-side
    // value of an observable equals the re-expressed final-side value of its
    // pushforward, componentwise.
    checks.push_back(detail::check_of("invariance-f-sigma3B", std::abs(v_s3B_i.f - v_m3A_f.f), 1e-10));
    checks.push_back(detail::check_of("invariance-V-sigma3B", max_abs_diff(v_s3B_i.V, r_m3A.V), 1e-10));
    checks.push_back(detail::check_of(
        "invariance-M-sigma3B", max_abs_diff(r_m3A.M.to_dense(), s3B_i.to_dense()), 1e-10));
    checks.push_back(detail::check_of("invariance-f-sigma3C", std::abs(v_s3C_i.f - v_m3A1C_f.f), 1e-10));
    checks.push_back(detail::check_of("invariance-V-sigma3C", max_abs_diff(v_s3C_i.V, r_m3A1C.V), 1e-10));
    checks.push_back(detail::check_of(
        "invariance-M-sigma3C", max_abs_diff(r_m3A1C.M.to_dense(), s3C_i.to_dense()), 1e-10));

    // Variance must equal f_{M^2} - f^2 for every recorded value.
    const auto variance_check = [&](const std::string& tag, const Operator& op, const State& st,
                                    const NCValue& v) {
        const Cx f2 = expectation(multiply(op, op), st);
        checks.push_back(detail::check_of("variance-identity-" + tag,
                                          std::abs(uncertainty(v) - (f2 - v.f * v.f).real()), 1e-10));
    };
    variance_check("sigma3_B-initial", s3B_i, initial, v_s3B_i);
    variance_check("sigma3_C-initial", s3C_i, initial, v_s3C_i);
    variance_check("-sigma3_A-final", m3A_f, fin, v_m3A_f);
    variance_check("sigma3_C-final", s3C_f, fin, v_s3C_f);
    variance_check("-sigma3_A.sigma1_C-final", m3A1C_f, fin, v_m3A1C_f);

    // Re-expression agrees with combining the primed components by hand.
    {
        const Vector& vp = v_m3A_f.V;
        Vector combo(4);
        combo[0] = r * (vp[2] + vp[3]);
        combo[1] = r * (vp[2] - vp[3]);
        combo[2] = r * (vp[1] - vp[0]);
        combo[3] = r * (vp[0] + vp[1]);
        checks.push_back(
            detail::check_of("v-reexpression-combination", max_abs_diff(combo, r_m3A.V), 1e-12));
    }

    if (sc.case_id == "c") {
        const double cc = std::norm(c), ss = std::norm(s);
        const Cx cbar = std::conj(c), sbar = std::conj(s);
        const double sq2 = std::sqrt(2.0);
        checks.push_back(
            detail::check_of("golden-f-sigma3B-initial", std::abs(v_s3B_i.f - Cx(cc - ss)), 1e-12));
        checks.push_back(
            detail::check_of("golden-f--sigma3A-final", std::abs(v_m3A_f.f - Cx(cc - ss)), 1e-12));
        Vector g1(4), g2(4), g3(4), g4(4);
        g1 << 2.0 * cbar * ss, 0, 0, -2.0 * sbar * cc;
        g2 << -sq2 * sbar * cc, -sq2 * sbar * cc, sq2 * cbar * ss, sq2 * cbar * ss;
        g3 << r * sbar, -r * sbar, r * cbar, -r * cbar;
        g4 << 0, cbar, -sbar, 0;
        checks.push_back(detail::check_of("golden-V-sigma3B-initial", max_abs_diff(v_s3B_i.V, g1), 1e-12));
        checks.push_back(detail::check_of("golden-V--sigma3A-final", max_abs_diff(v_m3A_f.V, g2), 1e-12));
        checks.push_back(detail::check_of("golden-V-sigma3C-final", max_abs_diff(v_s3C_f.V, g3), 1e-12));
        checks.push_back(
            detail::check_of("golden-V-sigma3C-reexpressed", max_abs_diff(r_s3C_f.V, g4), 1e-12));

        // The initial-side variance of sigma3_C comes out as 4|s|^2|c|^2,
        // which is what 1 - (|c|^2-|s|^2)^2 gives; the printed value in the
        // source material is 2|s|^2|c|^2. Both numbers are recorded here and
        // the mismatch is flagged instead of failed.
        const double computed = uncertainty(v_s3C_i);
        const double closed = 1.0 - (cc - ss) * (cc - ss);
        const double printed = 2.0 * ss * cc;
        checks.push_back(
            detail::check_of("variance-sigma3C-closed-form", std::abs(computed - closed), 1e-12));
        checks.push_back(detail::check_of(
            "variance-sigma3C-printed-comparison", std::abs(computed - printed), 1.0,
            "paper-discrepancy",
            "computed=" + fmt17(computed) + " printed=" + fmt17(printed)));
    }

    // Entanglement bookkeeping across the hop.
    const int rank_i = factor_rank(initial);
    const int rank_f = factor_rank(fin);
    rep.ranks.push_back({"initial-B|C", 2, 2, rank_i});
    rep.ranks.push_back({"final-A|C", 2, 2, rank_f});

    int want_i = -1, want_f = -1;
    if (sc.case_id == "a_prime") {
        want_i = 1;
        want_f = 1;
    } else if (sc.case_id == "b_prime") {
        want_i = 1;
        // The final 2x2 amplitude matrix has determinant -e^{i zeta'}(c^2+s^2)/2,
        // so the state is a product exactly when c^2 + s^2 vanishes.
        const double det2 = std::abs(c * c + s * s);
        if (det2 > 1e-6)
            want_f = 2;
        else if (det2 < 1e-12)
            want_f = 1;
    } else {
        const double off = std::abs(c) * std::abs(s);
        if (off > 1e-6)
            want_i = 2;
        else if (off < 1e-12)
            want_i = 1;
        want_f = 1;
    }
    if (want_i > 0)
        checks.push_back(detail::check_of("rank-initial-expected",
                                          std::abs(static_cast<double>(rank_i - want_i)), 0.5));
    if (want_f > 0)
        checks.push_back(detail::check_of("rank-final-expected",
                                          std::abs(static_cast<double>(rank_f - want_f)), 0.5));
    return rep;
}

} // namespace ncval::qubit
