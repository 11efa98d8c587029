#pragma once

#include <cmath>
#include <utility>

#include "ncval/layout.hpp"

namespace ncval {

// Normalized state vector over the active factors of a layout. The frame
// slot contributes no amplitudes: the frame's own "zero vector" state is
// structural, never numerical.
struct State {
    BasisLayout layout;
    Vector amplitudes;
    bool normalized = false;

    Index dim() const { return amplitudes.size(); }
    const std::string basis_id() const { return layout.basis_id(); }
};

inline State make_state(const BasisLayout& layout, Vector amplitudes, bool normalize) {
    if (amplitudes.size() != layout.dim())
        throw DimensionMismatch("amplitude length " + std::to_string(amplitudes.size()) +
                                " != layout dimension " + std::to_string(layout.dim()));
    const double norm = amplitudes.norm();
    if (norm == 0.0)
        throw ZeroVectorInput("all-zero amplitude vector; the zero vector is representable "
                              "only structurally, as a frame slot");
    if (normalize) {
        amplitudes /= norm;
    } else if (std::abs(norm - 1.0) > kNormTol) {
        throw NotNormalized("amplitudes have norm " + std::to_string(norm) +
                            " but normalize=false");
    }
    return State{layout, std::move(amplitudes), true};
}

// Basis vector |e_k> on the layout.
inline State basis_state(const BasisLayout& layout, Index k) {
    if (k < 0 || k >= layout.dim()) throw DimensionMismatch("basis index out of range");
    Vector z = Vector::Zero(layout.dim());
    z[k] = 1.0;
    return State{layout, std::move(z), true};
}

// Outer product; the combined layout is the concatenation, which must land
// in canonical role order.
inline State tensor_states(const State& a, const State& b) {
    for (const auto& fa : a.layout.factors())
        for (const auto& fb : b.layout.factors())
            if (fa.role == fb.role)
                throw RoleCollision(std::string("both operands carry role ") +
                                    role_name(fa.role));
    std::vector<Factor> factors = a.layout.factors();
    factors.insert(factors.end(), b.layout.factors().begin(), b.layout.factors().end());
    BasisLayout layout(std::move(factors)); // validates canonical order
    Vector z(a.amplitudes.size() * b.amplitudes.size());
    Index k = 0;
    for (Index i = 0; i < a.amplitudes.size(); ++i)
        for (Index j = 0; j < b.amplitudes.size(); ++j, ++k)
            z[k] = a.amplitudes[i] * b.amplitudes[j];
    return State{std::move(layout), std::move(z), a.normalized && b.normalized};
}

// Attach a frame slot to an existing layout (insertion keeps canonical order).
inline BasisLayout with_frame(const BasisLayout& layout, Role frame_role) {
    std::vector<Factor> factors = layout.factors();
    auto pos = factors.begin();
    while (pos != factors.end() && static_cast<int>(pos->role) < static_cast<int>(frame_role))
        ++pos;
    factors.insert(pos, frame_slot(frame_role));
    return BasisLayout(std::move(factors));
}

inline State with_frame(const State& s, Role frame_role) {
    return State{with_frame(s.layout, frame_role), s.amplitudes, s.normalized};
}

// Exchange the contents (dimension, labels, frame-ness, amplitude axis) of two
// named subsystems. Exchanging an active factor with the frame slot realizes
// the bookkeeping half of a frame change without touching any amplitude;
// exchanging two active factors transposes the corresponding tensor axes.
inline State swap_roles(const State& s, Role r1, Role r2) {
    if (r1 == r2) return s;
    const Factor& f1 = s.layout.factor(r1); // throws UnknownRole
    const Factor& f2 = s.layout.factor(r2);

    std::vector<Factor> factors = s.layout.factors();
    for (auto& f : factors) {
        if (f.role == r1) f = Factor{r1, f2.frame, f2.labels};
        else if (f.role == r2) f = Factor{r2, f1.frame, f1.labels};
    }
    BasisLayout new_layout(std::move(factors));

    if (f1.frame || f2.frame)
        return State{std::move(new_layout), s.amplitudes, s.normalized};

    // Both active: permute amplitudes by transposing the two axes.
    const Index ax1 = s.layout.active_axis(r1);
    const Index ax2 = s.layout.active_axis(r2);
    const auto old_dims = s.layout.active_dims();
    const auto old_strides = active_strides(s.layout);
    const auto new_strides = active_strides(new_layout);
    const std::size_t n_axes = old_dims.size();

    Vector out(s.amplitudes.size());
    std::vector<Index> idx(n_axes, 0);
    for (Index flat = 0; flat < s.amplitudes.size(); ++flat) {
        Index rem = flat;
        Index dst = 0;
        for (std::size_t ax = 0; ax < n_axes; ++ax) {
            idx[ax] = rem / old_strides[ax];
            rem %= old_strides[ax];
        }
        std::swap(idx[static_cast<std::size_t>(ax1)], idx[static_cast<std::size_t>(ax2)]);
        for (std::size_t ax = 0; ax < n_axes; ++ax) dst += idx[ax] * new_strides[ax];
        out[dst] = s.amplitudes[flat];
    }
    return State{std::move(new_layout), std::move(out), s.normalized};
}

inline Cx inner_product(const State& a, const State& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("inner product of unequal dimensions");
    return a.amplitudes.dot(b.amplitudes); // Eigen dot conjugates the left argument
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector size mismatch");
    return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("matrix shape mismatch");
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace ncval
