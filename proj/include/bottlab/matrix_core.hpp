#pragma once

// Dense complex linear algebra on checked square matrices: operator norms,
// Hermitian and normal (unitary) eigendecompositions, functional calculus.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bottlab/errors.hpp"

namespace bottlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kUnitaryTol = 1e-9;
inline constexpr double kEigTol = 1e-11;

namespace detail {

inline double frobenius(const Matrix& m) { return m.norm(); }

inline double largest_singular_value(const Matrix& m)
{
    if (m.size() == 0)
        return 0.0;
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

// Operator norm bounded above by the Frobenius norm; only fall back to the
// SVD when the cheap bound is inconclusive.
inline bool operator_norm_at_most(const Matrix& m, double tol)
{
    if (frobenius(m) <= tol)
        return true;
    return largest_singular_value(m) <= tol;
}

} // namespace detail

class SquareMatrix
{
public:
    explicit SquareMatrix(Matrix m) : m_(std::move(m))
    {
        if (m_.rows() != m_.cols())
            throw InvalidMatrix("matrix is not square: " + std::to_string(m_.rows()) + "x" +
                                std::to_string(m_.cols()));
        if (m_.rows() < 1)
            throw InvalidMatrix("matrix dimension must be at least 1");
        if (!m_.allFinite())
            throw InvalidMatrix("matrix has non-finite entries");
    }

    static SquareMatrix identity(Index n) { return SquareMatrix(Matrix::Identity(n, n)); }
    static SquareMatrix zero(Index n) { return SquareMatrix(Matrix::Zero(n, n)); }

    Index dim() const noexcept { return m_.rows(); }
    const Matrix& matrix() const noexcept { return m_; }
    Complex operator()(Index i, Index j) const { return m_(i, j); }
    Complex trace() const { return m_.trace(); }
    SquareMatrix adjoint() const { return SquareMatrix(m_.adjoint()); }

private:
    Matrix m_;
};

namespace detail {
inline void require_same_dim(const SquareMatrix& a, const SquareMatrix& b, const char* what)
{
    if (a.dim() != b.dim())
        throw DimensionError(std::string(what) + ": dimension mismatch " +
                             std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}
} // namespace detail

inline SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b)
{
    detail::require_same_dim(a, b, "operator+");
    return SquareMatrix(a.matrix() + b.matrix());
}

inline SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b)
{
    detail::require_same_dim(a, b, "operator-");
    return SquareMatrix(a.matrix() - b.matrix());
}

inline SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b)
{
    detail::require_same_dim(a, b, "operator*");
    return SquareMatrix(a.matrix() * b.matrix());
}

// Self-adjoint within hermitian_tol. The stored matrix is the exact
// Hermitian part (M + M*)/2 of the input.
class HermitianMatrix
{
public:
    explicit HermitianMatrix(const SquareMatrix& m, double tol = kHermitianTol)
        : m_(symmetrize(m, tol))
    {
    }

    Index dim() const noexcept { return m_.dim(); }
    const SquareMatrix& square() const noexcept { return m_; }
    const Matrix& matrix() const noexcept { return m_.matrix(); }
    Complex operator()(Index i, Index j) const { return m_(i, j); }
    double trace() const { return m_.trace().real(); }

private:
    static SquareMatrix symmetrize(const SquareMatrix& m, double tol)
    {
        const Matrix skew = m.matrix() - m.matrix().adjoint();
        if (!detail::operator_norm_at_most(skew, tol))
            throw InvalidMatrix("matrix is not Hermitian: |M - M*| = " +
                                std::to_string(detail::largest_singular_value(skew)));
        return SquareMatrix(0.5 * (m.matrix() + m.matrix().adjoint()));
    }

    SquareMatrix m_;
};

// Unitary within unitary_tol: |U*U - I| <= tol.
class UnitaryMatrix
{
public:
    explicit UnitaryMatrix(const SquareMatrix& m, double tol = kUnitaryTol) : m_(m)
    {
        const Index n = m_.dim();
        const Matrix defect = m_.matrix().adjoint() * m_.matrix() - Matrix::Identity(n, n);
        if (!detail::operator_norm_at_most(defect, tol))
            throw InvalidMatrix("matrix is not unitary: |U*U - I| = " +
                                std::to_string(detail::largest_singular_value(defect)));
    }

    static UnitaryMatrix identity(Index n) { return UnitaryMatrix(SquareMatrix::identity(n)); }

    Index dim() const noexcept { return m_.dim(); }
    const SquareMatrix& square() const noexcept { return m_; }
    const Matrix& matrix() const noexcept { return m_.matrix(); }
    Complex operator()(Index i, Index j) const { return m_(i, j); }
    UnitaryMatrix adjoint() const { return UnitaryMatrix(m_.adjoint()); }

private:
    SquareMatrix m_;
};

// Eigenvalues sorted ascending (real part, then imaginary part) with the
// matching eigenvector columns.
template <typename Scalar>
struct SpectralDecomposition
{
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigenvalues;
    UnitaryMatrix eigenvectors;

    Index dim() const { return eigenvalues.size(); }
};

using HermitianSpectrum = SpectralDecomposition<double>;
using UnitarySpectrum = SpectralDecomposition<Complex>;

inline double operator_norm(const Matrix& m)
{
    if (!m.allFinite())
        throw InvalidMatrix("operator_norm: non-finite entries");
    return detail::largest_singular_value(m);
}

inline double operator_norm(const SquareMatrix& m) { return detail::largest_singular_value(m.matrix()); }

// Spectral radius route; exact for self-adjoint input.
inline double operator_norm(const HermitianMatrix& h)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalError("operator_norm: Hermitian eigensolver failed");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline double operator_norm(const UnitaryMatrix& u) { return operator_norm(u.square()); }

inline SquareMatrix commutator(const SquareMatrix& a, const SquareMatrix& b)
{
    detail::require_same_dim(a, b, "commutator");
    return SquareMatrix(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

inline SquareMatrix commutator(const UnitaryMatrix& a, const UnitaryMatrix& b)
{
    return commutator(a.square(), b.square());
}

namespace detail {

inline void check_reconstruction(const Matrix& original, const Matrix& vectors,
                                 const Matrix& diagonal, const char* what)
{
    const double n = static_cast<double>(original.rows());
    const double scale = std::max(1.0, original.norm());
    const double err = (original - vectors * diagonal * vectors.adjoint()).norm();
    if (!(err <= kEigTol * n * scale))
        throw NumericalError(std::string(what) + ": reconstruction error " + std::to_string(err));
}

inline UnitaryMatrix checked_eigenvectors(Matrix v, const char* what)
{
    try {
        // Orthogonality of computed eigenvectors is a numerical property,
        // checked against the eigen tolerance scaled by dimension.
        const double tol = std::max(kUnitaryTol, kEigTol * static_cast<double>(v.rows()));
        return UnitaryMatrix(SquareMatrix(std::move(v)), tol);
    }
    catch (const InvalidMatrix& e) {
        throw NumericalError(std::string(what) + ": eigenvectors not orthonormal (" + e.what() + ")");
    }
}

} // namespace detail

inline HermitianSpectrum eig_hermitian(const HermitianMatrix& h)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
    if (es.info() != Eigen::Success)
        throw NumericalError("eig_hermitian: eigensolver did not converge");
    Eigen::VectorXd values = es.eigenvalues();
    Matrix vectors = es.eigenvectors();
    detail::check_reconstruction(h.matrix(), vectors, values.cast<Complex>().asDiagonal(),
                                 "eig_hermitian");
    return {std::move(values), detail::checked_eigenvectors(std::move(vectors), "eig_hermitian")};
}

// Schur form of a normal matrix is diagonal; a non-negligible strictly upper
// triangle means the input was not normal to working precision.
inline UnitarySpectrum eig_unitary(const UnitaryMatrix& u)
{
    const Index n = u.dim();
    Eigen::ComplexSchur<Matrix> schur(u.matrix(), true);
    if (schur.info() != Eigen::Success)
        throw NumericalError("eig_unitary: Schur iteration did not converge");
    const Matrix& t = schur.matrixT();
    const Matrix& q = schur.matrixU();

    const Matrix upper = t.triangularView<Eigen::StrictlyUpper>();
    if (!(upper.norm() <= kEigTol * static_cast<double>(n) * std::max(1.0, t.norm())))
        throw NumericalError("eig_unitary: Schur form not diagonal (input not normal)");

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        const Complex x = t(a, a), y = t(b, b);
        if (x.real() != y.real())
            return x.real() < y.real();
        return x.imag() < y.imag();
    });

    Eigen::VectorXcd values(n);
    Matrix vectors(n, n);
    for (Index i = 0; i < n; ++i) {
        values(i) = t(order[i], order[i]);
        vectors.col(i) = q.col(order[i]);
    }
    detail::check_reconstruction(u.matrix(), vectors, values.asDiagonal(), "eig_unitary");
    return {std::move(values), detail::checked_eigenvectors(std::move(vectors), "eig_unitary")};
}

// Position of a unit-modulus number on the circle, as x in [0,1) with
// z = exp(2 pi i x).
inline double circle_coordinate(Complex z)
{
    double x = std::arg(z) / (2.0 * std::numbers::pi);
    if (x < 0.0)
        x += 1.0;
    if (x >= 1.0)
        x -= 1.0;
    return x;
}

template <typename Scalar, typename Fn>
SquareMatrix apply_function(const SpectralDecomposition<Scalar>& spec, Fn&& fn)
{
    const Index n = spec.dim();
    Eigen::VectorXcd mapped(n);
    for (Index i = 0; i < n; ++i)
        mapped(i) = Complex(fn(spec.eigenvalues(i)));
    const Matrix& v = spec.eigenvectors.matrix();
    return SquareMatrix(v * mapped.asDiagonal() * v.adjoint());
}

// phi(H) = V phi(Lambda) V*.
template <typename Fn>
SquareMatrix apply_function_hermitian(const HermitianMatrix& h, Fn&& phi)
{
    return apply_function(eig_hermitian(h), std::forward<Fn>(phi));
}

// k(U) for k given as a function of the circle coordinate x in [0,1).
template <typename Fn>
SquareMatrix apply_function_unitary(const UnitarySpectrum& spec, Fn&& k)
{
    return apply_function(spec, [&](Complex z) { return Complex(k(circle_coordinate(z))); });
}

template <typename Fn>
SquareMatrix apply_function_unitary(const UnitaryMatrix& u, Fn&& k)
{
    return apply_function_unitary(eig_unitary(u), std::forward<Fn>(k));
}

inline Matrix kronecker(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace bottlab
