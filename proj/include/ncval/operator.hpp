#pragma once

#include <memory>
#include <optional>
#include <random>
#include <utility>

#include "ncval/state.hpp"

namespace ncval {

// Largest space on which operators are materialized as full matrices. Above
// this, only structure-preserving forms (diagonal, permutation, factor-dense,
// sums, composition chains) are available; the momentum-sector checks at
// N=256 live on a 65536-dimensional product space where a dense square
// matrix is not an option.
constexpr Index kSmallDenseDim = 1024;

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Linear operator between (usually identical) layouts. Acts only on active
// factors; the frame slot is untouched by construction. QRF unitaries are the
// one place domain and codomain differ: the matrix is square, the role
// bookkeeping changes.
class Operator {
public:
    enum class Kind { DenseOnSupport, Diagonal, Permutation, Sum, Composed };

    // --- factories ---

    // matrix over the product of the support roles' dimensions, row-major in
    // layout order; identity on every other active factor. Empty support =
    // scalar multiple of the identity (1x1 matrix).
    static Operator dense_on(BasisLayout layout, std::vector<Role> support, Matrix m) {
        std::sort(support.begin(), support.end(), [&](Role a, Role b) {
            return layout.active_axis(a) < layout.active_axis(b);
        });
        Index ds = 1;
        for (Role r : support) ds *= layout.factor(r).dim();
        if (m.rows() != ds || m.cols() != ds)
            throw DimensionMismatch("support matrix is " + std::to_string(m.rows()) +
                                    "x" + std::to_string(m.cols()) + ", support dimension " +
                                    std::to_string(ds));
        Operator op(Kind::DenseOnSupport, layout, layout);
        op.hermitian_ = max_abs_diff(Matrix(m.adjoint()), m) < kFlagTol;
        op.unitary_ = max_abs_diff(Matrix(m * m.adjoint()), Matrix(Matrix::Identity(ds, ds))) < kFlagTol;
        op.support_ = std::move(support);
        op.m_ = std::move(m);
        return op;
    }

    static Operator dense(const BasisLayout& layout, Matrix m) {
        return dense_on(layout, layout.active_roles(), std::move(m));
    }

    // dense matrix that also relabels roles (QRF unitaries).
    static Operator dense_mapping(BasisLayout domain, BasisLayout codomain, Matrix m) {
        if (domain.dim() != codomain.dim() || m.rows() != domain.dim() || m.cols() != domain.dim())
            throw DimensionMismatch("mapping matrix must be square on the shared dimension");
        Operator op(Kind::DenseOnSupport, std::move(domain), std::move(codomain));
        op.hermitian_ = false; // flag meaningless across distinct bases
        op.unitary_ =
            max_abs_diff(Matrix(m * m.adjoint()), Matrix(Matrix::Identity(m.rows(), m.rows()))) < kFlagTol;
        op.support_ = op.domain_.active_roles();
        op.m_ = std::move(m);
        return op;
    }

    static Operator identity(const BasisLayout& layout) {
        return dense_on(layout, {}, Matrix::Ones(1, 1));
    }

    static Operator scalar(const BasisLayout& layout, Cx r) {
        Matrix m(1, 1);
        m(0, 0) = r;
        return dense_on(layout, {}, std::move(m));
    }

    static Operator diagonal(BasisLayout layout, Vector d) {
        if (d.size() != layout.dim())
            throw DimensionMismatch("diagonal length != layout dimension");
        Operator op(Kind::Diagonal, layout, layout);
        op.hermitian_ = d.imag().cwiseAbs().maxCoeff() < kFlagTol;
        op.unitary_ = (d.cwiseAbs().array() - 1.0).abs().maxCoeff() < kFlagTol;
        op.diag_ = std::move(d);
        return op;
    }

    // out[perm[i]] = in[i]; always unitary.
    static Operator permutation(BasisLayout domain, BasisLayout codomain, std::vector<Index> perm) {
        const Index d = domain.dim();
        if (codomain.dim() != d || static_cast<Index>(perm.size()) != d)
            throw DimensionMismatch("permutation size mismatch");
        std::vector<char> seen(static_cast<std::size_t>(d), 0);
        for (Index i = 0; i < d; ++i) {
            const Index t = perm[static_cast<std::size_t>(i)];
            if (t < 0 || t >= d || seen[static_cast<std::size_t>(t)])
                throw BadParameters("permutation is not a bijection");
            seen[static_cast<std::size_t>(t)] = 1;
        }
        Operator op(Kind::Permutation, std::move(domain), std::move(codomain));
        op.unitary_ = true;
        bool invol = (op.domain_ == op.codomain_);
        for (Index i = 0; invol && i < d; ++i)
            invol = perm[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] == i;
        op.hermitian_ = invol;
        op.perm_ = std::move(perm);
        return op;
    }

    static Operator sum(std::vector<std::pair<Cx, Operator>> terms) {
        if (terms.empty()) throw BadParameters("empty operator sum");
        for (const auto& [c, t] : terms) {
            (void)c;
            if (t.domain() != terms.front().second.domain() ||
                t.codomain() != terms.front().second.codomain())
                throw DimensionMismatch("sum terms must share layouts");
        }
        Operator op(Kind::Sum, terms.front().second.domain(), terms.front().second.codomain());
        op.hermitian_ = true;
        for (const auto& [c, t] : terms)
            op.hermitian_ = op.hermitian_ && t.hermitian() && std::abs(c.imag()) < kFlagTol;
        op.unitary_ = false;
        for (auto& [c, t] : terms)
            op.parts_.emplace_back(c, std::make_shared<const Operator>(std::move(t)));
        return op;
    }

    // --- inspectors ---

    Kind kind() const { return kind_; }
    const BasisLayout& domain() const { return domain_; }
    const BasisLayout& codomain() const { return codomain_; }
    Index dim() const { return domain_.dim(); }
    bool hermitian() const { return hermitian_; }
    bool unitary() const { return unitary_; }
    const Vector& diagonal_entries() const {
        if (kind_ != Kind::Diagonal) throw BadParameters("operator is not diagonal");
        return diag_;
    }
    const std::vector<Index>& permutation_map() const {
        if (kind_ != Kind::Permutation) throw BadParameters("operator is not a permutation");
        return perm_;
    }

    // --- action ---

    Vector apply(const Vector& x) const {
        if (x.size() != dim()) throw DimensionMismatch("apply: vector length != operator dimension");
        switch (kind_) {
            case Kind::Diagonal:
                return diag_.cwiseProduct(x);
            case Kind::Permutation: {
                Vector y(x.size());
                for (Index i = 0; i < x.size(); ++i) y[perm_[static_cast<std::size_t>(i)]] = x[i];
                return y;
            }
            case Kind::Sum: {
                Vector y = Vector::Zero(x.size());
                for (const auto& [c, p] : parts_) y += c * p->apply(x);
                return y;
            }
            case Kind::Composed: {
                Vector y = x;
                for (auto it = parts_.rbegin(); it != parts_.rend(); ++it)
                    y = it->first * it->second->apply(y);
                return y;
            }
            case Kind::DenseOnSupport:
                return apply_dense_on(x);
        }
        throw BadParameters("unreachable operator kind");
    }

    Operator adjoint() const {
        switch (kind_) {
            case Kind::Diagonal:
                return diagonal(domain_, diag_.conjugate());
            case Kind::Permutation: {
                std::vector<Index> inv(perm_.size());
                for (Index i = 0; i < static_cast<Index>(perm_.size()); ++i)
                    inv[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])] = i;
                return permutation(codomain_, domain_, std::move(inv));
            }
            case Kind::Sum: {
                std::vector<std::pair<Cx, Operator>> terms;
                for (const auto& [c, p] : parts_) terms.emplace_back(std::conj(c), p->adjoint());
                return sum(std::move(terms));
            }
            case Kind::Composed: {
                Operator op(Kind::Composed, codomain_, domain_);
                for (auto it = parts_.rbegin(); it != parts_.rend(); ++it)
                    op.parts_.emplace_back(std::conj(it->first),
                                           std::make_shared<const Operator>(it->second->adjoint()));
                op.hermitian_ = hermitian_;
                op.unitary_ = unitary_;
                return op;
            }
            case Kind::DenseOnSupport: {
                if (domain_ == codomain_) return dense_on(domain_, support_, m_.adjoint());
                return dense_mapping(codomain_, domain_, m_.adjoint());
            }
        }
        throw BadParameters("unreachable operator kind");
    }

    Operator scale(Cx c) const {
        switch (kind_) {
            case Kind::Diagonal:
                return diagonal(domain_, c * diag_);
            case Kind::DenseOnSupport: {
                if (domain_ == codomain_) return dense_on(domain_, support_, c * m_);
                return dense_mapping(domain_, codomain_, c * m_);
            }
            case Kind::Sum: {
                std::vector<std::pair<Cx, Operator>> terms;
                for (const auto& [tc, p] : parts_) terms.emplace_back(c * tc, *p);
                return sum(std::move(terms));
            }
            default:
                return sum({{c, *this}});
        }
    }

    bool dense_representable(Index cap = kSmallDenseDim) const {
        if (dim() > cap) return false;
        if (kind_ == Kind::Sum || kind_ == Kind::Composed)
            for (const auto& [c, p] : parts_) {
                (void)c;
                if (!p->dense_representable(cap)) return false;
            }
        return true;
    }

    Matrix to_dense(Index cap = kSmallDenseDim) const {
        const Index d = dim();
        if (d > cap)
            throw DimensionMismatch("refusing to materialize a " + std::to_string(d) + "x" +
                                    std::to_string(d) + " matrix (cap " + std::to_string(cap) + ")");
        switch (kind_) {
            case Kind::Diagonal: {
                Matrix out = Matrix::Zero(d, d);
                out.diagonal() = diag_;
                return out;
            }
            case Kind::Permutation: {
                Matrix out = Matrix::Zero(d, d);
                for (Index i = 0; i < d; ++i) out(perm_[static_cast<std::size_t>(i)], i) = 1.0;
                return out;
            }
            case Kind::Sum: {
                Matrix out = Matrix::Zero(d, d);
                for (const auto& [c, p] : parts_) out += c * p->to_dense(cap);
                return out;
            }
            case Kind::Composed: {
                Matrix out = Matrix::Identity(d, d);
                for (const auto& [c, p] : parts_) out = c * (out * p->to_dense(cap));
                return out;
            }
            case Kind::DenseOnSupport:
                return dense_on_full(d);
        }
        throw BadParameters("unreachable operator kind");
    }

    friend Operator multiply(const Operator& a, const Operator& b);
    friend Operator conjugate(const Operator& u, const Operator& op);
    friend Operator add_scaled(const std::vector<std::pair<Cx, Operator>>& terms);

private:
    Operator(Kind k, BasisLayout dom, BasisLayout cod)
        : kind_(k), domain_(std::move(dom)), codomain_(std::move(cod)) {}

    Kind kind_;
    BasisLayout domain_, codomain_;
    bool hermitian_ = false;
    bool unitary_ = false;

    std::vector<Role> support_; // DenseOnSupport
    Matrix m_;                  // DenseOnSupport
    Vector diag_;               // Diagonal
    std::vector<Index> perm_;   // Permutation
    std::vector<std::pair<Cx, std::shared_ptr<const Operator>>> parts_; // Sum/Composed

    // offsets of every support-index combination (row-major over support axes)
    // and of every rest-index combination, in the flat amplitude index.
    void support_offsets(std::vector<Index>& supp, std::vector<Index>& rest) const {
        const auto dims = domain_.active_dims();
        const auto strides = active_strides(domain_);
        std::vector<std::size_t> saxes;
        for (Role r : support_) saxes.push_back(static_cast<std::size_t>(domain_.active_axis(r)));
        std::vector<char> is_support(dims.size(), 0);
        for (auto ax : saxes) is_support[ax] = 1;

        supp.assign(1, 0);
        for (auto ax : saxes) {
            std::vector<Index> next;
            next.reserve(supp.size() * static_cast<std::size_t>(dims[ax]));
            for (Index base : supp)
                for (Index i = 0; i < dims[ax]; ++i) next.push_back(base + i * strides[ax]);
            supp = std::move(next);
        }
        rest.assign(1, 0);
        for (std::size_t ax = 0; ax < dims.size(); ++ax) {
            if (is_support[ax]) continue;
            std::vector<Index> next;
            next.reserve(rest.size() * static_cast<std::size_t>(dims[ax]));
            for (Index base : rest)
                for (Index i = 0; i < dims[ax]; ++i) next.push_back(base + i * strides[ax]);
            rest = std::move(next);
        }
    }

    Vector apply_dense_on(const Vector& x) const {
        const Index ds = m_.rows();
        if (support_.empty()) return m_(0, 0) * x; // scalar multiple of identity
        if (support_.size() == domain_.active_roles().size() && domain_ == codomain_)
            return m_ * x; // full support, no embedding needed
        if (domain_ != codomain_) return m_ * x; // mapping between bases, always full
        std::vector<Index> supp, rest;
        support_offsets(supp, rest);
        Vector y(x.size());
        Vector xs(ds), ys(ds);
        for (Index base : rest) {
            for (Index k = 0; k < ds; ++k) xs[k] = x[base + supp[static_cast<std::size_t>(k)]];
            ys.noalias() = m_ * xs;
            for (Index k = 0; k < ds; ++k) y[base + supp[static_cast<std::size_t>(k)]] = ys[k];
        }
        return y;
    }

    Matrix dense_on_full(Index d) const {
        if (support_.size() == domain_.active_roles().size() || domain_ != codomain_) {
            if (support_.empty()) return m_(0, 0) * Matrix::Identity(d, d);
            return m_;
        }
        std::vector<Index> supp, rest;
        support_offsets(supp, rest);
        Matrix out = Matrix::Zero(d, d);
        for (Index base : rest)
            for (Index i = 0; i < m_.rows(); ++i)
                for (Index j = 0; j < m_.cols(); ++j)
                    out(base + supp[static_cast<std::size_t>(i)],
                        base + supp[static_cast<std::size_t>(j)]) = m_(i, j);
        return out;
    }
};

// a.b as a composition (b acts first).
inline Operator multiply(const Operator& a, const Operator& b) {
    if (!(b.codomain() == a.domain()))
        throw DimensionMismatch("operator product: inner layouts differ");
    using K = Operator::Kind;

    if (a.kind_ == K::Diagonal && b.kind_ == K::Diagonal)
        return Operator::diagonal(b.domain(), a.diag_.cwiseProduct(b.diag_));

    if (a.kind_ == K::Permutation && b.kind_ == K::Permutation) {
        std::vector<Index> p(b.perm_.size());
        for (std::size_t i = 0; i < p.size(); ++i)
            p[i] = a.perm_[static_cast<std::size_t>(b.perm_[i])];
        return Operator::permutation(b.domain(), a.codomain(), std::move(p));
    }

    if (a.kind_ == K::DenseOnSupport && b.kind_ == K::DenseOnSupport &&
        a.domain() == a.codomain() && b.domain() == b.codomain()) {
        if (a.support_ == b.support_)
            return Operator::dense_on(a.domain(), a.support_, a.m_ * b.m_);
        // disjoint single-role supports commute past each other: merge by kron
        if (a.support_.size() == 1 && b.support_.size() == 1 &&
            a.support_[0] != b.support_[0] &&
            a.m_.rows() * b.m_.rows() <= kSmallDenseDim) {
            const bool a_first =
                a.domain().active_axis(a.support_[0]) < b.domain().active_axis(b.support_[0]);
            Matrix m = a_first ? kron(a.m_, b.m_) : kron(b.m_, a.m_);
            std::vector<Role> support = {a.support_[0], b.support_[0]};
            return Operator::dense_on(a.domain(), std::move(support), std::move(m));
        }
    }

    // full dense mappings (e.g. composing QRF hops) and small spaces
    if (a.dim() <= kSmallDenseDim && a.dense_representable() && b.dense_representable()) {
        Matrix m = a.to_dense() * b.to_dense();
        if (b.domain() == a.codomain())
            return Operator::dense(b.domain(), std::move(m));
        return Operator::dense_mapping(b.domain(), a.codomain(), std::move(m));
    }

    Operator op(Operator::Kind::Composed, b.domain(), a.codomain());
    auto push = [&op](const Operator& x) {
        if (x.kind_ == Operator::Kind::Composed)
            for (const auto& part : x.parts_) op.parts_.push_back(part);
        else
            op.parts_.emplace_back(Cx(1.0), std::make_shared<const Operator>(x));
    };
    push(a);
    push(b);
    op.unitary_ = a.unitary() && b.unitary();
    op.hermitian_ = false;
    return op;
}

inline Operator operator*(const Operator& a, const Operator& b) { return multiply(a, b); }

// Linear combination with structure-preserving fast paths.
inline Operator add_scaled(const std::vector<std::pair<Cx, Operator>>& terms) {
    if (terms.empty()) throw BadParameters("empty operator combination");
    bool all_diag = true;
    for (const auto& [c, t] : terms) {
        (void)c;
        all_diag = all_diag && t.kind() == Operator::Kind::Diagonal;
    }
    if (all_diag) {
        Vector d = Vector::Zero(terms.front().second.dim());
        for (const auto& [c, t] : terms) d += c * t.diagonal_entries();
        return Operator::diagonal(terms.front().second.domain(), std::move(d));
    }
    std::vector<std::pair<Cx, Operator>> copy = terms;
    return Operator::sum(std::move(copy));
}

inline Operator operator+(const Operator& a, const Operator& b) {
    return add_scaled({{Cx(1.0), a}, {Cx(1.0), b}});
}
inline Operator operator-(const Operator& a, const Operator& b) {
    return add_scaled({{Cx(1.0), a}, {Cx(-1.0), b}});
}

// u op u^dagger. Exact structure-preserving paths for permutation frames;
// hermitian/unitary flags carry over (conjugation by a unitary preserves both).
inline Operator conjugate(const Operator& u, const Operator& op) {
    if (!u.unitary()) throw NotUnitary("conjugation frame must be unitary");
    if (!(op.domain() == u.domain()) || !(op.codomain() == u.domain()))
        throw DimensionMismatch("conjugate: operator must live on the frame's domain");
    using K = Operator::Kind;

    if (u.kind_ == K::Permutation) {
        if (op.kind_ == K::Diagonal) {
            Vector d(op.diag_.size());
            for (Index i = 0; i < d.size(); ++i)
                d[u.perm_[static_cast<std::size_t>(i)]] = op.diag_[i];
            return Operator::diagonal(u.codomain(), std::move(d));
        }
        if (op.kind_ == K::Permutation) {
            // i -> u(op(u^{-1}(i))) expressed over the codomain index set
            std::vector<Index> p(op.perm_.size());
            for (std::size_t i = 0; i < p.size(); ++i)
                p[static_cast<std::size_t>(u.perm_[i])] =
                    u.perm_[static_cast<std::size_t>(op.perm_[i])];
            return Operator::permutation(u.codomain(), u.codomain(), std::move(p));
        }
        if (op.kind_ == K::Sum) {
            std::vector<std::pair<Cx, Operator>> terms;
            for (const auto& [c, p] : op.parts_) terms.emplace_back(c, conjugate(u, *p));
            return Operator::sum(std::move(terms));
        }
    }

    if (u.dim() <= kSmallDenseDim && u.dense_representable() && op.dense_representable()) {
        Matrix um = u.to_dense();
        Matrix m = um * op.to_dense() * um.adjoint();
        return Operator::dense(u.codomain(), std::move(m));
    }

    Operator out(Operator::Kind::Composed, u.codomain(), u.codomain());
    out.parts_.emplace_back(Cx(1.0), std::make_shared<const Operator>(u));
    out.parts_.emplace_back(Cx(1.0), std::make_shared<const Operator>(op));
    out.parts_.emplace_back(Cx(1.0), std::make_shared<const Operator>(u.adjoint()));
    out.hermitian_ = op.hermitian();
    out.unitary_ = op.unitary();
    return out;
}

// Kronecker embedding of a local operator onto the named factor of a layout.
inline Operator operator_on_factor(const Operator& local, Role role, const BasisLayout& layout) {
    const Factor& f = layout.factor(role); // throws UnknownRole
    if (f.frame) throw UnknownRole(std::string("role ") + role_name(role) + " is the frame slot");
    if (local.dim() != f.dim())
        throw DimensionMismatch("local operator dimension != factor dimension");
    if (local.kind() == Operator::Kind::Diagonal) {
        // broadcast along the other axes: exact diagonal embedding
        const auto dims = layout.active_dims();
        const auto strides = active_strides(layout);
        const auto axis = static_cast<std::size_t>(layout.active_axis(role));
        Vector d(layout.dim());
        for (Index i = 0; i < layout.dim(); ++i) {
            const Index k = (i / strides[axis]) % dims[axis];
            d[i] = local.diagonal_entries()[k];
        }
        return Operator::diagonal(layout, std::move(d));
    }
    return Operator::dense_on(layout, {role}, local.to_dense());
}

// Identity padding: an operator declared on a single-factor sub-layout is
// lifted onto the matching factor of a larger layout.
inline Operator embedded(const Operator& op, const BasisLayout& layout) {
    if (op.domain() == layout) return op;
    if (op.domain().factors().size() == 1 && !op.domain().factors()[0].frame &&
        layout.has_role(op.domain().factors()[0].role) &&
        layout.factor(op.domain().factors()[0].role).labels == op.domain().factors()[0].labels)
        return operator_on_factor(op, op.domain().factors()[0].role, layout);
    throw DimensionMismatch("operator layout does not match state layout");
}

inline State apply(const Operator& op, const State& s) {
    const Operator effective = embedded(op, s.layout);
    Vector y = effective.apply(s.amplitudes);
    const bool unit = std::abs(y.norm() - 1.0) <= kNormTol;
    return State{effective.codomain(), std::move(y), unit};
}

inline Cx expectation(const Operator& op, const State& s) {
    if (!s.normalized) throw NotNormalized("expectation requires a normalized state");
    if (!(op.domain() == op.codomain()))
        throw DimensionMismatch("expectation needs an operator on a single basis");
    const State ms = apply(op, s);
    return s.amplitudes.dot(ms.amplitudes);
}

// max |(A-B)v|_inf over deterministic pseudo-random unit probes; exact dense
// comparison when both sides are materializable. The probe variant is a
// sampled lower bound, good enough to certify equality to a tolerance.
inline double operator_action_diff(const Operator& a, const Operator& b,
                                   int probes = 8, std::uint64_t seed = 0x9e3779b97f4a7c15ull) {
    if (a.dim() != b.dim()) throw DimensionMismatch("operator comparison size mismatch");
    if (a.kind() == Operator::Kind::Diagonal && b.kind() == Operator::Kind::Diagonal)
        return max_abs_diff(a.diagonal_entries(), b.diagonal_entries());
    if (a.dense_representable() && b.dense_representable())
        return max_abs_diff(a.to_dense(), b.to_dense());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    double worst = 0.0;
    for (int p = 0; p < probes; ++p) {
        Vector v(a.dim());
        for (Index i = 0; i < v.size(); ++i) v[i] = Cx(g(rng), g(rng));
        v /= v.norm();
        worst = std::max(worst, (a.apply(v) - b.apply(v)).cwiseAbs().maxCoeff());
    }
    return worst;
}

} // namespace ncval
