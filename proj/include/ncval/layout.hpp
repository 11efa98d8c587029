#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ncval/errors.hpp"

namespace ncval {

using Cx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

constexpr double kFlagTol = 1e-12;   // hermitian/unitary construction checks
constexpr double kNormTol = 1e-12;   // unit-norm checks

enum class Role : std::uint8_t { A = 0, B = 1, C = 2, Generic = 3 };

inline const char* role_name(Role r) {
    switch (r) {
        case Role::A: return "A";
        case Role::B: return "B";
        case Role::C: return "C";
        case Role::Generic: return "G";
    }
    return "?";
}

// One tensor factor. A frame slot is the subsystem currently serving as the
// reference frame: it carries no amplitudes (dimension 0) and no labels.
struct Factor {
    Role role = Role::Generic;
    bool frame = false;
    std::vector<double> labels; // one real label per basis vector; empty iff frame

    Index dim() const { return frame ? 0 : static_cast<Index>(labels.size()); }
};

inline Factor frame_slot(Role r) { return Factor{r, true, {}}; }

inline Factor active_factor(Role r, std::vector<double> labels) {
    return Factor{r, false, std::move(labels)};
}

// Factor with labels 0..d-1 (kets named by index).
inline Factor indexed_factor(Role r, Index d) {
    std::vector<double> labels(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) labels[static_cast<std::size_t>(i)] = double(i);
    return Factor{r, false, std::move(labels)};
}

// Ordered factor list. Roles are unique, listed in canonical order
// (A before B before C before Generic), at most one frame slot.
// Amplitude index <-> multi-index over the active factors, row major.
class BasisLayout {
public:
    BasisLayout() = default;

    explicit BasisLayout(std::vector<Factor> factors) : factors_(std::move(factors)) {
        validate();
    }

    const std::vector<Factor>& factors() const { return factors_; }
    std::size_t size() const { return factors_.size(); }

    Index dim() const {
        Index d = 1;
        for (const auto& f : factors_)
            if (!f.frame) d *= f.dim();
        return d;
    }

    bool has_role(Role r) const { return find(r) != nullptr; }

    const Factor& factor(Role r) const {
        const Factor* f = find(r);
        if (!f) throw UnknownRole(std::string("no factor with role ") + role_name(r));
        return *f;
    }

    std::vector<Role> active_roles() const {
        std::vector<Role> out;
        for (const auto& f : factors_)
            if (!f.frame) out.push_back(f.role);
        return out;
    }

    std::vector<Index> active_dims() const {
        std::vector<Index> out;
        for (const auto& f : factors_)
            if (!f.frame) out.push_back(f.dim());
        return out;
    }

    // Position of the role among active factors (the tensor axis it indexes).
    Index active_axis(Role r) const {
        Index axis = 0;
        for (const auto& f : factors_) {
            if (f.frame) {
                if (f.role == r)
                    throw UnknownRole(std::string("role ") + role_name(r) +
                                      " is the frame slot, not an active factor");
                continue;
            }
            if (f.role == r) return axis;
            ++axis;
        }
        throw UnknownRole(std::string("no factor with role ") + role_name(r));
    }

    bool operator==(const BasisLayout& o) const {
        if (factors_.size() != o.factors_.size()) return false;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            const auto& a = factors_[i];
            const auto& b = o.factors_[i];
            if (a.role != b.role || a.frame != b.frame || a.labels != b.labels) return false;
        }
        return true;
    }
    bool operator!=(const BasisLayout& o) const { return !(*this == o); }

    // Stable identifier of the computational basis this layout induces.
    std::string basis_id() const {
        std::string id;
        for (const auto& f : factors_) {
            if (!id.empty()) id += '|';
            id += role_name(f.role);
            if (f.frame) {
                id += '#';
            } else {
                id += ':';
                id += std::to_string(f.dim());
                id += ':';
                id += label_hash(f.labels);
            }
        }
        return id;
    }

private:
    std::vector<Factor> factors_;

    const Factor* find(Role r) const {
        for (const auto& f : factors_)
            if (f.role == r) return &f;
        return nullptr;
    }

    static std::string label_hash(const std::vector<double>& labels) {
        // FNV-1a over the raw label bytes, hex-truncated; only used to make
        // basis ids distinct across label sets of equal dimension.
        std::uint64_t h = 1469598103934665603ull;
        for (double v : labels) {
            unsigned char bytes[sizeof(double)];
            std::memcpy(bytes, &v, sizeof(double));
            for (unsigned char b : bytes) {
                h ^= b;
                h *= 1099511628211ull;
            }
        }
        char buf[13];
        std::snprintf(buf, sizeof(buf), "%08x", static_cast<unsigned>(h & 0xffffffffu));
        return buf;
    }

    void validate() const {
        if (factors_.empty()) throw BadLayout("layout needs at least one factor");
        int frames = 0;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            const auto& f = factors_[i];
            if (f.frame) {
                ++frames;
                if (!f.labels.empty())
                    throw BadLayout("frame slot carries no labels");
            } else if (f.labels.empty()) {
                throw BadLayout("active factor needs labels (dimension >= 1)");
            }
            for (std::size_t j = i + 1; j < factors_.size(); ++j)
                if (factors_[j].role == f.role)
                    throw RoleCollision(std::string("duplicate role ") + role_name(f.role));
            if (i + 1 < factors_.size() &&
                static_cast<int>(factors_[i + 1].role) <= static_cast<int>(f.role))
                throw BadLayout("factors must be in canonical role order (A,B,C,G)");
        }
        if (frames > 1) throw BadLayout("at most one frame slot per layout");
        bool any_active = false;
        for (const auto& f : factors_)
            if (!f.frame) any_active = true;
        if (!any_active) throw BadLayout("layout needs at least one active factor");
    }
};

inline BasisLayout single_factor_layout(Role r, std::vector<double> labels) {
    return BasisLayout({active_factor(r, std::move(labels))});
}

inline BasisLayout single_indexed_layout(Role r, Index d) {
    return BasisLayout({indexed_factor(r, d)});
}

// Row-major strides over the active factors.
inline std::vector<Index> active_strides(const BasisLayout& layout) {
    auto dims = layout.active_dims();
    std::vector<Index> strides(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;)
        strides[i - 1] = strides[i] * dims[i];
    return strides;
}

} // namespace ncval
