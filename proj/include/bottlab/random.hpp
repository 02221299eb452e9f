#pragma once

// Seeded random matrices. Every draw flows from a caller-owned engine so
// runs are reproducible from a single seed.

#include <cstdint>
#include <random>

#include <Eigen/QR>

#include "bottlab/matrix_core.hpp"

namespace bottlab {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

inline Matrix random_gaussian(Index rows, Index cols, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = Complex(re, im);
        }
    return m;
}

// Haar-distributed unitary (QR of a Ginibre matrix with the phase fix on R).
inline UnitaryMatrix random_unitary(Index n, Rng& rng)
{
    const Matrix z = random_gaussian(n, n, rng);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0)
            q.col(j) *= d / std::abs(d);
    }
    return UnitaryMatrix(SquareMatrix(std::move(q)));
}

inline HermitianMatrix random_hermitian(Index n, Rng& rng)
{
    const Matrix z = random_gaussian(n, n, rng);
    return HermitianMatrix(SquareMatrix(0.5 * (z + z.adjoint())));
}

// Orthogonal projection onto the span of the first `rank` columns of a
// Haar unitary.
inline SquareMatrix random_projection_matrix(Index k, Index rank, Rng& rng)
{
    if (rank < 0 || rank > k)
        throw std::invalid_argument("random_projection_matrix: rank out of range");
    const UnitaryMatrix w = random_unitary(k, rng);
    const Matrix cols = w.matrix().leftCols(rank);
    return SquareMatrix(cols * cols.adjoint());
}

} // namespace bottlab
