#pragma once

// Concrete operator families on finite windows of the Fourier basis
// {delta_m}: the clock/shift pairs, the partial rotations u_t, and the
// Dirac-operator model F_t = ramp(D / t).

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "bottlab/errors.hpp"
#include "bottlab/matrix_core.hpp"

namespace bottlab {

// Fourier modes m_min..m_max; always contains mode 0.
class TruncatedFourierSpace
{
public:
    TruncatedFourierSpace(int m_min, int m_max) : m_min_(m_min), m_max_(m_max)
    {
        if (!(m_min_ <= 0 && 0 <= m_max_))
            throw WindowError("TruncatedFourierSpace: window [" + std::to_string(m_min) + ", " +
                              std::to_string(m_max) + "] must contain mode 0");
    }

    int m_min() const noexcept { return m_min_; }
    int m_max() const noexcept { return m_max_; }
    Index dim() const noexcept { return m_max_ - m_min_ + 1; }
    int mode(Index i) const noexcept { return m_min_ + static_cast<int>(i); }
    Index position(int mode) const noexcept { return mode - m_min_; }
    bool contains(int mode) const noexcept { return m_min_ <= mode && mode <= m_max_; }

    TruncatedFourierSpace widened(int margin) const { return {m_min_ - margin, m_max_ + margin}; }

    friend bool operator==(const TruncatedFourierSpace&, const TruncatedFourierSpace&) = default;

private:
    int m_min_;
    int m_max_;
};

// Direction of a shift on the Fourier basis. Backward is b
// (delta_m -> delta_{m-1}, multiplication by z^{-1}); Forward is the shift
// delta_m -> delta_{m+1} of the clock/shift pair.
enum class ShiftOrientation { Backward, Forward };

enum class ShiftBoundary { Cyclic, Truncated };

class DiracRamp
{
public:
    DiracRamp() : chi_(standard_profile) {}

    explicit DiracRamp(std::function<double(double)> chi) : chi_(std::move(chi))
    {
        for (double x : {-10.0, -1.0, -1e-3, 0.0})
            if (std::abs(chi_(x) + 1.0) > 1e-12)
                throw std::invalid_argument("DiracRamp: profile must be -1 on (-inf, 0]");
        for (double x : {1.0, 1.0 + 1e-3, 2.0, 10.0})
            if (std::abs(chi_(x) - 1.0) > 1e-12)
                throw std::invalid_argument("DiracRamp: profile must be 1 on [1, inf)");
    }

    double operator()(double x) const { return chi_(x); }

    static double standard_profile(double x)
    {
        if (x <= 0.0)
            return -1.0;
        if (x >= 1.0)
            return 1.0;
        return 2.0 * x - 1.0;
    }

private:
    std::function<double(double)> chi_;
};

namespace detail {
inline Complex unit_phase(double turns)
{
    return std::polar(1.0, 2.0 * std::numbers::pi * turns);
}
} // namespace detail

// Clock u = diag(exp(2 pi i k / n)) and forward cyclic shift
// v delta_k = delta_{k+1 mod n}.
inline std::pair<UnitaryMatrix, UnitaryMatrix> voiculescu_pair(int n)
{
    if (n < 1)
        throw std::invalid_argument("voiculescu_pair: n must be >= 1");
    Matrix u = Matrix::Zero(n, n);
    Matrix v = Matrix::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        u(k, k) = detail::unit_phase(static_cast<double>(k) / n);
        v((k + 1) % n, k) = 1.0;
    }
    return {UnitaryMatrix(SquareMatrix(std::move(u))), UnitaryMatrix(SquareMatrix(std::move(v)))};
}

inline double commutator_norm_voiculescu(int n)
{
    const auto [u, v] = voiculescu_pair(n);
    return operator_norm(commutator(u, v));
}

// u_t delta_m = exp(2 pi i m / t) delta_m for 0 <= m <= t, delta_m otherwise.
inline UnitaryMatrix u_t_operator(double t, const TruncatedFourierSpace& space)
{
    if (!(t >= 1.0))
        throw std::invalid_argument("u_t_operator: t must be >= 1");
    Matrix u = Matrix::Identity(space.dim(), space.dim());
    for (Index i = 0; i < space.dim(); ++i) {
        const int m = space.mode(i);
        if (0 <= m && m <= t)
            u(i, i) = detail::unit_phase(m / t);
    }
    return UnitaryMatrix(SquareMatrix(std::move(u)));
}

// Shift on the window. Cyclic wraps the edge mode around (a unitary);
// Truncated drops it (a partial isometry with one zero column).
inline SquareMatrix bilateral_shift(const TruncatedFourierSpace& space, ShiftBoundary boundary,
                                    ShiftOrientation orientation = ShiftOrientation::Backward)
{
    const Index n = space.dim();
    const Index step = orientation == ShiftOrientation::Backward ? -1 : 1;
    Matrix b = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        Index target = i + step;
        if (target < 0 || target >= n) {
            if (boundary == ShiftBoundary::Truncated)
                continue;
            target = (target + n) % n;
        }
        b(target, i) = 1.0;
    }
    return SquareMatrix(std::move(b));
}

// The cyclic backward shift b_N on modes 0..N-1.
inline UnitaryMatrix cyclic_shift(int n, ShiftOrientation orientation = ShiftOrientation::Backward)
{
    if (n < 1)
        throw std::invalid_argument("cyclic_shift: n must be >= 1");
    return UnitaryMatrix(bilateral_shift(TruncatedFourierSpace(0, n - 1), ShiftBoundary::Cyclic, orientation));
}

// F_t delta_m = ramp(m / t) delta_m.
inline HermitianMatrix dirac_F_t(double t, const TruncatedFourierSpace& space, const DiracRamp& ramp = {})
{
    if (!(t >= 1.0))
        throw std::invalid_argument("dirac_F_t: t must be >= 1");
    Matrix f = Matrix::Zero(space.dim(), space.dim());
    for (Index i = 0; i < space.dim(); ++i)
        f(i, i) = ramp(space.mode(i) / t);
    return HermitianMatrix(SquareMatrix(std::move(f)));
}

inline constexpr double kDiracIdentityTol = 1e-12;

// -exp(pi i F_t), checked entrywise against u_t_operator.
inline UnitaryMatrix ut_from_dirac(double t, const TruncatedFourierSpace& space, const DiracRamp& ramp = {})
{
    const HermitianMatrix f = dirac_F_t(t, space, ramp);
    Matrix u = Matrix::Zero(space.dim(), space.dim());
    for (Index i = 0; i < space.dim(); ++i)
        u(i, i) = -std::exp(Complex(0.0, std::numbers::pi * f.matrix()(i, i).real()));

    const UnitaryMatrix expected = u_t_operator(t, space);
    const double err = (u - expected.matrix()).cwiseAbs().maxCoeff();
    if (err > kDiracIdentityTol)
        throw ModelInconsistencyError("ut_from_dirac: -exp(pi i F_t) differs from u_t by " + std::to_string(err));
    return UnitaryMatrix(SquareMatrix(std::move(u)));
}

} // namespace bottlab
