#pragma once

// Loring element of a pair of unitaries, its spectral projection at 1/2,
// and the integer index tr chi(e) - n.
//
//          [ f(u)             g(u) + h(u) v ]
//   e  =   [                                ]
//          [ v* h(u) + g(u)   1 - f(u)      ]

#include <cmath>
#include <string>
#include <utility>

#include "bottlab/errors.hpp"
#include "bottlab/matrix_core.hpp"
#include "bottlab/symbols.hpp"

namespace bottlab {

inline constexpr double kDefaultGapMin = 0.05;
inline constexpr double kIndexSlack = 0.01;
inline constexpr double kProjectionTol = 1e-9;

class LoringElement
{
public:
    LoringElement(HermitianMatrix matrix, Index source_dim, SymbolTriple triple)
        : matrix_(std::move(matrix)), source_dim_(source_dim), triple_(std::move(triple))
    {
        if (matrix_.dim() != 2 * source_dim_)
            throw DimensionError("LoringElement: matrix must be 2n x 2n");
        const double tr = matrix_.trace();
        if (std::abs(tr - static_cast<double>(source_dim_)) > 1e-9)
            throw NumericalError("LoringElement: trace " + std::to_string(tr) + " differs from n = " +
                                 std::to_string(source_dim_));
    }

    const HermitianMatrix& matrix() const noexcept { return matrix_; }
    Index source_dim() const noexcept { return source_dim_; }
    const SymbolTriple& triple() const noexcept { return triple_; }

private:
    HermitianMatrix matrix_;
    Index source_dim_;
    SymbolTriple triple_;
};

struct IndexResult
{
    int index = 0;
    double gap = 0.0;       // min distance of spec(e) to 1/2
    double defect = 0.0;    // |e^2 - e|
    double raw_trace = 0.0; // tr chi(e) - n before rounding
};

namespace detail {

struct SymbolCalculus
{
    Matrix f, g, h;
};

inline SymbolCalculus symbol_calculus(const UnitaryMatrix& u, const SymbolTriple& t)
{
    const UnitarySpectrum spec = eig_unitary(u);
    return {apply_function_unitary(spec, t.f).matrix(), apply_function_unitary(spec, t.g).matrix(),
            apply_function_unitary(spec, t.h).matrix()};
}

inline double chi_half(double x) { return x >= 0.5 ? 1.0 : 0.0; }

} // namespace detail

// v need not be unitary: the pairing feeds truncated multiplication
// operators that are partial isometries near the window edge.
inline LoringElement loring_element(const UnitaryMatrix& u, const SquareMatrix& v, const SymbolTriple& t)
{
    if (u.dim() != v.dim())
        throw DimensionError("loring_element: u and v have different dimensions");
    const Index n = u.dim();
    const auto [f, g, h] = detail::symbol_calculus(u, t);
    const Matrix& vm = v.matrix();

    Matrix e(2 * n, 2 * n);
    e.topLeftCorner(n, n) = f;
    e.topRightCorner(n, n) = g + h * vm;
    e.bottomLeftCorner(n, n) = vm.adjoint() * h + g;
    e.bottomRightCorner(n, n) = Matrix::Identity(n, n) - f;
    return LoringElement(HermitianMatrix(SquareMatrix(std::move(e))), n, t);
}

inline LoringElement loring_element(const UnitaryMatrix& u, const UnitaryMatrix& v, const SymbolTriple& t)
{
    return loring_element(u, v.square(), t);
}

// Right-hand side of e^2 = e + R with f = f(u), g = g(u), h = h(u):
//
//   R = [ h v g + g v* h     [f, h v]        ]
//       [ [v* h, f]          v* h^2 v - h^2  ]
inline SquareMatrix defect_identity_rhs(const UnitaryMatrix& u, const SquareMatrix& v, const SymbolTriple& t)
{
    if (u.dim() != v.dim())
        throw DimensionError("defect_identity_rhs: u and v have different dimensions");
    const Index n = u.dim();
    const auto [f, g, h] = detail::symbol_calculus(u, t);
    const Matrix& vm = v.matrix();
    const Matrix vs = vm.adjoint();
    const Matrix hv = h * vm;
    const Matrix vsh = vs * h;

    Matrix r(2 * n, 2 * n);
    r.topLeftCorner(n, n) = hv * g + g * vsh;
    r.topRightCorner(n, n) = f * hv - hv * f;
    r.bottomLeftCorner(n, n) = vsh * f - f * vsh;
    r.bottomRightCorner(n, n) = vsh * hv - h * h;
    return SquareMatrix(std::move(r));
}

inline SquareMatrix defect_identity_rhs(const UnitaryMatrix& u, const UnitaryMatrix& v, const SymbolTriple& t)
{
    return defect_identity_rhs(u, v.square(), t);
}

inline double spectral_gap_at_half(const HermitianSpectrum& spec)
{
    return (spec.eigenvalues.array() - 0.5).abs().minCoeff();
}

inline double spectral_gap_at_half(const LoringElement& e)
{
    return spectral_gap_at_half(eig_hermitian(e.matrix()));
}

namespace detail {

inline void require_gap(double gap, double gap_min, const char* what)
{
    if (!(gap > gap_min))
        throw GapClosedError(std::string(what) + ": spectral gap at 1/2 is " + std::to_string(gap) +
                                 " (required > " + std::to_string(gap_min) + ")",
                             gap);
}

inline SquareMatrix checked_projection(const HermitianSpectrum& spec)
{
    SquareMatrix p = apply_function(spec, chi_half);
    const Matrix& pm = p.matrix();
    if (!detail::operator_norm_at_most(pm * pm - pm, kProjectionTol) ||
        !detail::operator_norm_at_most(pm - pm.adjoint(), kProjectionTol))
        throw NumericalError("spectral_projection: result is not an orthogonal projection");
    return p;
}

} // namespace detail

// chi(e) for chi the indicator of [1/2, inf).
inline SquareMatrix spectral_projection(const HermitianMatrix& e, double gap_min = kDefaultGapMin)
{
    const HermitianSpectrum spec = eig_hermitian(e);
    detail::require_gap(spectral_gap_at_half(spec), gap_min, "spectral_projection");
    return detail::checked_projection(spec);
}

inline SquareMatrix spectral_projection(const LoringElement& e, double gap_min = kDefaultGapMin)
{
    return spectral_projection(e.matrix(), gap_min);
}

// tr chi(e) minus the rank n of the reference projection diag(1, 0).
inline IndexResult loring_index(const LoringElement& e, double gap_min = kDefaultGapMin)
{
    const HermitianSpectrum spec = eig_hermitian(e.matrix());
    IndexResult r;
    r.gap = spectral_gap_at_half(spec);
    detail::require_gap(r.gap, gap_min, "bott_index");

    const SquareMatrix p = detail::checked_projection(spec);
    r.raw_trace = p.trace().real() - static_cast<double>(e.source_dim());
    r.index = static_cast<int>(std::lround(r.raw_trace));
    if (std::abs(r.raw_trace - r.index) > kIndexSlack)
        throw NonIntegerIndexError("bott_index: raw trace " + std::to_string(r.raw_trace) +
                                   " is not within 0.01 of an integer");

    const Matrix& em = e.matrix().matrix();
    r.defect = operator_norm(HermitianMatrix(SquareMatrix(em * em - em)));
    return r;
}

// u is the clock (its spectrum is fed to f, g, h), v is the shift.
inline IndexResult bott_index(const UnitaryMatrix& u, const UnitaryMatrix& v, const SymbolTriple& t,
                              double gap_min = kDefaultGapMin)
{
    return loring_index(loring_element(u, v, t), gap_min);
}

} // namespace bottlab
