#pragma once

#include "ncval/operator.hpp"

namespace ncval {

// Noncommutative value of an observable at a state: the triple {f, V, M}
// expressed in a declared orthonormal basis.
//   f   = expectation, zbar M z
//   V_n = d f / d z_n at the state = -f zbar_n + sum_m zbar_m M^m_n
//   M   = matrix elements (beta)^m_n in the same basis
// V vanishes exactly on eigenstates; sum |V_n|^2 is the variance.
struct NCValue {
    Cx f;
    Vector V;
    Operator M;
    std::string basis_id;
};

// Conjugate-coordinate derivative components, d f / d zbar_n = (M z - f z)_n.
// Equals conj(V_n) whenever M is Hermitian; kept general so products like
// x*p flow through the calculus unharmed.
inline Vector ncvalue_vbar(const Operator& m, const Vector& z, Cx f) {
    return m.apply(z) - f * z;
}

inline NCValue ncvalue_of(const Operator& op, const State& s) {
    if (!s.normalized) throw NotNormalized("NC value requires a normalized state");
    const Operator m = embedded(op, s.layout);
    if (!(m.domain() == m.codomain()))
        throw DimensionMismatch("NC value needs an operator on a single basis");
    const Vector& z = s.amplitudes;
    const Vector mz = m.apply(z);
    const Cx f = z.dot(mz);
    // (zbar M)_n = conj((M^dagger z)_n)
    Vector v = m.adjoint().apply(z).conjugate() - f * z.conjugate();
    return NCValue{f, std::move(v), m, s.basis_id()};
}

inline double uncertainty(const NCValue& v) { return v.V.squaredNorm(); }

// Star product of two values at their shared generating state: the image of
// operator multiplication under the value map. f composes through the first
// derivatives; M composes as the operator product; V is regenerated from the
// result, keeping the triple self-consistent.
inline NCValue star(const NCValue& a, const NCValue& b, const State& s) {
    if (a.basis_id != b.basis_id)
        throw BasisMismatch("star: operands expressed in different bases");
    if (s.basis_id() != a.basis_id)
        throw BasisMismatch("star: state is not expressed in the operands' basis");
    if (a.V.size() != s.dim() || b.V.size() != s.dim())
        throw DimensionMismatch("star: component size mismatch");
    const Vector& z = s.amplitudes;
    const Vector vbar_b = ncvalue_vbar(b.M, z, b.f);
    Cx f = a.f * b.f;
    for (Index n = 0; n < z.size(); ++n) f += a.V[n] * vbar_b[n];
    Operator m = multiply(a.M, b.M);
    Vector v = m.adjoint().apply(z).conjugate() - f * z.conjugate();
    return NCValue{f, std::move(v), std::move(m), a.basis_id};
}

inline NCValue linear_combine(const std::vector<Cx>& coeffs, const std::vector<NCValue>& values) {
    if (coeffs.size() != values.size() || values.empty())
        throw BadParameters("linear_combine: need one coefficient per value");
    for (const auto& v : values)
        if (v.basis_id != values.front().basis_id)
            throw BasisMismatch("linear_combine: operands expressed in different bases");
    Cx f = 0.0;
    Vector v = Vector::Zero(values.front().V.size());
    std::vector<std::pair<Cx, Operator>> terms;
    for (std::size_t i = 0; i < values.size(); ++i) {
        f += coeffs[i] * values[i].f;
        v += coeffs[i] * values[i].V;
        terms.emplace_back(coeffs[i], values[i].M);
    }
    return NCValue{f, std::move(v), add_scaled(terms), values.front().basis_id};
}

// Re-express the same value in the basis whose coordinates are z' = u z:
// V' = V u^dagger (row-vector pattern), M' = u M u^dagger, f unchanged.
// To pull a transformed-frame value back into the original basis, pass the
// adjoint of the frame unitary.
inline NCValue reexpress(const NCValue& v, const Operator& u) {
    if (!u.unitary()) throw NotUnitary("reexpress requires a unitary basis change");
    if (u.dim() != v.V.size()) throw DimensionMismatch("reexpress: dimension mismatch");
    if (u.domain().basis_id() != v.basis_id)
        throw BasisMismatch("reexpress: value is not expressed in the map's domain basis");
    // (V u^dagger)_n = conj(sum_m u_nm conj(V_m))
    Vector vp = u.apply(v.V.conjugate()).conjugate();
    return NCValue{v.f, std::move(vp), conjugate(u, v.M), u.codomain().basis_id()};
}

// Second mixed derivative k~_{mbar n} = d^2 f / (d z_n d zbar_m); together
// with f and V it reconstructs the matrix elements.
struct KTilde {
    Matrix k;
    std::string basis_id;
};

inline KTilde ktilde_of(const Operator& op, const State& s) {
    if (!s.normalized) throw NotNormalized("k~ requires a normalized state");
    const Operator m = embedded(op, s.layout);
    const Matrix md = m.to_dense();
    const Vector& z = s.amplitudes;
    const Cx f = z.dot(md * z);
    const Vector v = (md.adjoint() * z).conjugate() - f * z.conjugate();
    const Vector vbar = md * z - f * z;
    const Index d = z.size();
    Matrix k(d, d);
    for (Index mm = 0; mm < d; ++mm)
        for (Index n = 0; n < d; ++n)
            k(mm, n) = md(mm, n) - f * (mm == n ? 1.0 : 0.0) - z[mm] * v[n] -
                       std::conj(z[n]) * vbar[mm];
    return KTilde{std::move(k), s.basis_id()};
}

// M^m_n = k~ + f delta + z_m V_n + zbar_n conj(V_m) (Hermitian observables).
inline Matrix reconstruct_matrix(const KTilde& kt, Cx f, const Vector& v, const Vector& z) {
    const Index d = z.size();
    if (kt.k.rows() != d || v.size() != d) throw DimensionMismatch("reconstruct: size mismatch");
    Matrix m(d, d);
    for (Index mm = 0; mm < d; ++mm)
        for (Index n = 0; n < d; ++n)
            m(mm, n) = kt.k(mm, n) + f * (mm == n ? 1.0 : 0.0) + z[mm] * v[n] +
                       std::conj(z[n]) * std::conj(v[mm]);
    return m;
}

// Singular-value rank of a coefficient vector reshaped over a bipartition
// (row-major, d1 x d2). Rank 1 <=> the vector factorizes across the cut.
inline int factor_rank(const Vector& coeffs, Index d1, Index d2, double rel_tol = 1e-10) {
    if (d1 <= 0 || d2 <= 0 || d1 * d2 != coeffs.size())
        throw BadBipartition("bipartition " + std::to_string(d1) + "x" + std::to_string(d2) +
                             " does not match length " + std::to_string(coeffs.size()));
    using RowMajor = Eigen::Matrix<Cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Matrix m = Eigen::Map<const RowMajor>(coeffs.data(), d1, d2);
    Eigen::BDCSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] <= 0.0) return 0;
    int rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv[i] > rel_tol * sv[0]) ++rank;
    return rank;
}

// Bipartition of a two-active-factor state across its factors.
inline int factor_rank(const State& s, double rel_tol = 1e-10) {
    const auto dims = s.layout.active_dims();
    if (dims.size() != 2)
        throw BadBipartition("state bipartition requires exactly two active factors");
    return factor_rank(s.amplitudes, dims[0], dims[1], rel_tol);
}

} // namespace ncval
