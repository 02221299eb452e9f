#pragma once

// Pairing of the partial rotations u_t with matrix-valued loops on the
// circle, the Bott map on projections, and the determinant winding number
// used as an independent check of the pairing.
//
// A loop z -> sum_m z^m a_m acts on window (x) C^k by multiplication:
// z^m delta_n = delta_{n+m}. Sign convention (fixed by the requirement that
// the loop z -> z^{-1} pairs to +1): pairing(z^m) = -m = -winding(z^m).

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/LU>

#include "bottlab/errors.hpp"
#include "bottlab/loring.hpp"
#include "bottlab/matrix_core.hpp"
#include "bottlab/model.hpp"
#include "bottlab/symbols.hpp"

namespace bottlab {

inline constexpr int kLoopValidationGrid = 256;
inline constexpr double kLoopUnitaryTol = 1e-8;
inline constexpr double kProjectionInvariantTol = 1e-10;

enum class BasepointPolicy {
    Identity, // loop(1) = I, a class in the unitization of the suspension
    Any,      // loop(1) only needs to be unitary
};

class LoopUnitary
{
public:
    LoopUnitary(int k, std::map<int, Matrix> coeffs, BasepointPolicy policy = BasepointPolicy::Identity)
        : k_(k)
    {
        if (k_ < 1)
            throw InvalidMatrix("LoopUnitary: k must be >= 1");
        for (auto& [mode, a] : coeffs) {
            if (a.rows() != k_ || a.cols() != k_)
                throw DimensionError("LoopUnitary: coefficient of mode " + std::to_string(mode) + " is not " +
                                     std::to_string(k_) + "x" + std::to_string(k_));
            if (!a.allFinite())
                throw InvalidMatrix("LoopUnitary: coefficient of mode " + std::to_string(mode) +
                                    " has non-finite entries");
            if (a.cwiseAbs().maxCoeff() > 0.0) {
                degree_ = std::max(degree_, std::abs(mode));
                coeffs_.emplace(mode, std::move(a));
            }
        }
        validate(policy);
    }

    // z -> z^m times I_k.
    static LoopUnitary monomial(int m, int k = 1) { return LoopUnitary(k, {{m, Matrix::Identity(k, k)}}); }
    static LoopUnitary constant(int k) { return monomial(0, k); }

    int k() const noexcept { return k_; }
    int degree() const noexcept { return degree_; }
    const std::map<int, Matrix>& coeffs() const noexcept { return coeffs_; }

    // Value at z = exp(2 pi i x).
    Matrix evaluate(double x) const
    {
        Matrix out = Matrix::Zero(k_, k_);
        for (const auto& [mode, a] : coeffs_)
            out += std::polar(1.0, 2.0 * std::numbers::pi * mode * x) * a;
        return out;
    }

private:
    void validate(BasepointPolicy policy) const
    {
        const Matrix id = Matrix::Identity(k_, k_);
        for (int i = 0; i < kLoopValidationGrid; ++i) {
            const Matrix value = evaluate(static_cast<double>(i) / kLoopValidationGrid);
            const double defect = operator_norm(Matrix(value.adjoint() * value - id));
            if (defect > kLoopUnitaryTol)
                throw NotAUnitaryLoop("LoopUnitary: not unitary at grid point " + std::to_string(i) +
                                      " (|v*v - I| = " + std::to_string(defect) + ")");
        }
        if (policy == BasepointPolicy::Identity) {
            const double drift = operator_norm(Matrix(evaluate(0.0) - id));
            if (drift > kLoopUnitaryTol)
                throw NotAUnitaryLoop("LoopUnitary: loop(1) differs from the identity by " + std::to_string(drift));
        }
    }

    int k_;
    int degree_ = 0;
    std::map<int, Matrix> coeffs_;
};

class ProjectionMatrix
{
public:
    explicit ProjectionMatrix(SquareMatrix p) : p_(std::move(p))
    {
        const Matrix& m = p_.matrix();
        const double idem = operator_norm(Matrix(m * m - m));
        const double herm = operator_norm(Matrix(m - m.adjoint()));
        if (idem > kProjectionInvariantTol || herm > kProjectionInvariantTol)
            throw NotAProjection("ProjectionMatrix: |p^2 - p| = " + std::to_string(idem) +
                                 ", |p - p*| = " + std::to_string(herm));
    }

    Index k() const noexcept { return p_.dim(); }
    const SquareMatrix& square() const noexcept { return p_; }
    const Matrix& matrix() const noexcept { return p_.matrix(); }
    int rank() const { return static_cast<int>(std::lround(p_.trace().real())); }

private:
    SquareMatrix p_;
};

// z -> z^{-1} p + (1 - p).
inline LoopUnitary bott_loop(const ProjectionMatrix& p)
{
    const Index k = p.k();
    return LoopUnitary(static_cast<int>(k), {{-1, p.matrix()}, {0, Matrix::Identity(k, k) - p.matrix()}});
}

// v (x) p + 1 (x) (1 - p), the external product of a loop with a projection.
inline LoopUnitary product_loop(const LoopUnitary& v, const ProjectionMatrix& p)
{
    const Index j = v.k(), k = p.k();
    std::map<int, Matrix> coeffs;
    for (const auto& [mode, a] : v.coeffs())
        coeffs[mode] = kronecker(a, p.matrix());
    const Matrix complement = kronecker(Matrix::Identity(j, j), Matrix::Identity(k, k) - p.matrix());
    auto [it, inserted] = coeffs.try_emplace(0, complement);
    if (!inserted)
        it->second += complement;
    return LoopUnitary(static_cast<int>(j * k), std::move(coeffs));
}

inline LoopUnitary direct_sum(const LoopUnitary& a, const LoopUnitary& b)
{
    const int k = a.k() + b.k();
    std::map<int, Matrix> coeffs;
    auto place = [&](const LoopUnitary& loop, int offset) {
        for (const auto& [mode, c] : loop.coeffs()) {
            auto [it, inserted] = coeffs.try_emplace(mode, Matrix::Zero(k, k));
            it->second.block(offset, offset, loop.k(), loop.k()) = c;
        }
    };
    place(a, 0);
    place(b, a.k());
    return LoopUnitary(k, std::move(coeffs));
}

// Block (m+n, n) of the result holds a_m; rows leaving the window are dropped.
inline SquareMatrix multiplication_operator(const LoopUnitary& v, const TruncatedFourierSpace& space)
{
    if (!space.contains(-v.degree()) || !space.contains(v.degree()))
        throw WindowError("multiplication_operator: window [" + std::to_string(space.m_min()) + ", " +
                          std::to_string(space.m_max()) + "] does not contain modes +-" +
                          std::to_string(v.degree()));
    const Index k = v.k();
    const Index w = space.dim();
    Matrix out = Matrix::Zero(w * k, w * k);
    for (const auto& [mode, a] : v.coeffs())
        for (Index col = 0; col < w; ++col) {
            const Index row = col + mode;
            if (row >= 0 && row < w)
                out.block(row * k, col * k, k, k) = a;
        }
    return SquareMatrix(std::move(out));
}

// u_t (x) 1_k on the window.
inline UnitaryMatrix amplified_u_t(double t, const TruncatedFourierSpace& space, int k)
{
    return UnitaryMatrix(SquareMatrix(kronecker(u_t_operator(t, space).matrix(), Matrix::Identity(k, k))));
}

struct PairingOptions
{
    double gap_min = kDefaultGapMin;
    int margin = 4;
    int stability_margin = 8;
};

// [-degree - margin, ceil(t) + degree + margin].
inline TruncatedFourierSpace auto_window(const LoopUnitary& v, double t, int margin = 4)
{
    return {-v.degree() - margin, static_cast<int>(std::ceil(t)) + v.degree() + margin};
}

inline LoringElement pairing_element(const LoopUnitary& v, double t, const SymbolTriple& triple,
                                     const TruncatedFourierSpace& space)
{
    return loring_element(amplified_u_t(t, space, v.k()), multiplication_operator(v, space), triple);
}

// Modes on which e(u_t (x) 1, V) differs from diag(1, 0) by more than
// kLocalityTol; half_width is the smallest N with that set inside [-N, N].
struct LocalityReport
{
    int half_width = 0;
    int support_min = 0;
    int support_max = 0;
    bool empty = true;
};

inline constexpr double kLocalityTol = 1e-12;

inline LocalityReport locality_window(const LoringElement& e, const TruncatedFourierSpace& space, int k)
{
    const Index n = e.source_dim();
    Matrix diff = e.matrix().matrix();
    diff.topLeftCorner(n, n) -= Matrix::Identity(n, n);

    LocalityReport r;
    for (Index pos = 0; pos < space.dim(); ++pos) {
        double worst = 0.0;
        for (Index c = 0; c < k; ++c)
            for (Index block : {Index{0}, n}) {
                const Index idx = block + pos * k + c;
                worst = std::max({worst, diff.row(idx).cwiseAbs().maxCoeff(), diff.col(idx).cwiseAbs().maxCoeff()});
            }
        if (worst > kLocalityTol) {
            const int mode = space.mode(pos);
            if (r.empty) {
                r.support_min = r.support_max = mode;
                r.empty = false;
            }
            r.support_min = std::min(r.support_min, mode);
            r.support_max = std::max(r.support_max, mode);
        }
    }
    r.half_width = r.empty ? 0 : std::max(std::abs(r.support_min), std::abs(r.support_max));
    return r;
}

// Scans a window wider than any the pairing uses, so that the reported
// support is not clipped by truncation.
inline LocalityReport locality_window(const LoopUnitary& v, double t, const SymbolTriple& triple,
                                      const PairingOptions& opts = {})
{
    const TruncatedFourierSpace scan = auto_window(v, t, opts.margin).widened(opts.stability_margin);
    return locality_window(pairing_element(v, t, triple, scan), scan, v.k());
}

struct PairingResult
{
    IndexResult result;
    TruncatedFourierSpace window{0, 0};
    LocalityReport locality;
};

// Index of chi(e(u_t (x) 1_k, V)) - diag(1, 0) on an explicit window.
inline IndexResult pairing_index_on(const LoopUnitary& v, double t, const SymbolTriple& triple,
                                    const TruncatedFourierSpace& space, double gap_min = kDefaultGapMin)
{
    return loring_index(pairing_element(v, t, triple, space), gap_min);
}

// Auto-sized window; certifies that the nontrivial part of e lies inside it
// and that a window widened by opts.stability_margin gives the same index.
inline PairingResult pairing_index(const LoopUnitary& v, double t, const SymbolTriple& triple,
                                   const PairingOptions& opts = {})
{
    if (!(t >= 1.0))
        throw std::invalid_argument("pairing_index: t must be >= 1");
    PairingResult out;
    out.window = auto_window(v, t, opts.margin);

    const TruncatedFourierSpace wide = out.window.widened(opts.stability_margin);
    const LoringElement wide_element = pairing_element(v, t, triple, wide);
    out.locality = locality_window(wide_element, wide, v.k());
    if (!out.locality.empty &&
        (out.locality.support_min < out.window.m_min() || out.locality.support_max > out.window.m_max()))
        throw WindowError("pairing_index: support [" + std::to_string(out.locality.support_min) + ", " +
                          std::to_string(out.locality.support_max) + "] leaves the window");

    out.result = pairing_index_on(v, t, triple, out.window, opts.gap_min);
    const IndexResult wide_result = loring_index(wide_element, opts.gap_min);
    if (wide_result.index != out.result.index)
        throw StabilityError("pairing_index: window " + std::to_string(out.window.dim()) + " gives " +
                             std::to_string(out.result.index) + ", widened window gives " +
                             std::to_string(wide_result.index));
    return out;
}

// Degree of z -> det v(z). The sample count is raised when needed so that
// consecutive samples of the determinant (a Laurent polynomial of degree at
// most k * degree) differ in phase by well under pi.
inline int winding_number(const LoopUnitary& v, int samples)
{
    if (samples < 8 * (v.degree() + 1))
        throw std::invalid_argument("winding_number: need at least 8 * (degree + 1) samples");
    const int used = std::max(samples, 8 * (v.k() * v.degree() + 1));

    auto det_at = [&](int i) {
        const Complex d = v.evaluate(static_cast<double>(i) / used).determinant();
        if (std::abs(d) < 0.5)
            throw SampleError("winding_number: near-singular determinant at sample " + std::to_string(i));
        return d;
    };
    const Complex first = det_at(0);
    Complex previous = first;
    double total = 0.0;
    for (int i = 1; i <= used; ++i) {
        const Complex current = i == used ? first : det_at(i);
        total += std::arg(current / previous);
        previous = current;
    }
    const double turns = total / (2.0 * std::numbers::pi);
    const long rounded = std::lround(turns);
    if (std::abs(turns - static_cast<double>(rounded)) > kIndexSlack)
        throw SampleError("winding_number: phase total " + std::to_string(turns) + " is not an integer");
    return static_cast<int>(rounded);
}

// alpha(beta(p)) == rank p.
inline bool roundtrip_check(const ProjectionMatrix& p, double t, const SymbolTriple& triple,
                            const PairingOptions& opts = {})
{
    return pairing_index(bott_loop(p), t, triple, opts).result.index == p.rank();
}

// pairing(v (x) p + 1 (x) (1 - p)) == pairing(v) * rank p.
inline bool product_compatibility_check(const LoopUnitary& v, const ProjectionMatrix& p, double t,
                                        const SymbolTriple& triple, const PairingOptions& opts = {})
{
    const int lhs = pairing_index(product_loop(v, p), t, triple, opts).result.index;
    const int rhs = pairing_index(v, t, triple, opts).result.index * p.rank();
    return lhs == rhs;
}

} // namespace bottlab
