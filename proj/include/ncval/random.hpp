#pragma once

#include <random>

#include "ncval/layout.hpp"

namespace ncval {

// Deterministic draws for the property suites. Every helper consumes the
// generator in a fixed order, so one seed pins an entire suite run.

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = Cx(g(rng), g(rng));
    return m;
}

inline Vector random_unit_vector(std::mt19937_64& rng, Index d) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vector z(d);
    for (Index i = 0; i < d; ++i) z[i] = Cx(g(rng), g(rng));
    return z / z.norm();
}

inline Matrix random_hermitian(std::mt19937_64& rng, Index d) {
    const Matrix a = random_matrix(rng, d, d);
    return 0.5 * (a + Matrix(a.adjoint()));
}

// Haar-distributed unitary: QR of a Ginibre matrix with the R diagonal
// rephased to the positive real axis.
inline Matrix random_unitary(std::mt19937_64& rng, Index d) {
    const Matrix a = random_matrix(rng, d, d);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR();
    for (Index i = 0; i < d; ++i) {
        const Cx rii = r(i, i);
        if (rii != Cx(0.0)) q.col(i) *= rii / std::abs(rii);
    }
    return q;
}

} // namespace ncval
