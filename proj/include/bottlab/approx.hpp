#pragma once

// Distance from an almost-commuting pair to exactly commuting pairs:
//
//  * an upper bound by search: simultaneous unitary diagonalization by
//    complex Jacobi rotations (Cardoso-Souloumiac angles) applied to the
//    Hermitian and skew parts of u and v, followed by projecting the
//    diagonals onto the circle;
//
//  * a certified lower bound from the index: if |u - u'|, |v - v'| < eps
//    moves e(u, v) by less than its gap at 1/2, the index is preserved, but
//    commuting pairs have index 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "bottlab/errors.hpp"
#include "bottlab/loring.hpp"
#include "bottlab/matrix_core.hpp"
#include "bottlab/model.hpp"
#include "bottlab/parallel.hpp"
#include "bottlab/random.hpp"
#include "bottlab/symbols.hpp"

namespace bottlab {

// |k^(m)| for |m| <= max_mode of each symbol, from a 2^14-point quadrature,
// plus a bound on sum_{|m| > max_mode} |k^(m)| from a power-law fit of the
// coefficient envelope (doubled).
struct SymbolSeries
{
    int max_mode = 0;
    std::array<std::vector<double>, 3> magnitudes; // index m + max_mode
    std::array<double, 3> tail_beyond{};

    double magnitude(int symbol, int m) const { return magnitudes[symbol][m + max_mode]; }
};

inline constexpr int kSeriesQuadraturePoints = 1 << 14;
inline constexpr int kSeriesMaxMode = 1024;

namespace detail {

inline double envelope(const std::vector<double>& mags, int max_mode, int lo, int hi)
{
    double e = 0.0;
    for (int m = lo + 1; m <= hi; ++m)
        e = std::max({e, mags[m + max_mode], mags[-m + max_mode]});
    return e;
}

inline double fitted_tail(const std::vector<double>& mags, int max_mode)
{
    constexpr double roundoff_floor = 1e-14;
    const double inner = envelope(mags, max_mode, max_mode / 4, max_mode / 2);
    const double outer = envelope(mags, max_mode, max_mode / 2, max_mode);
    if (outer < roundoff_floor)
        return 1e-12;
    const double p = std::log2(inner / outer);
    if (!(p > 1.05))
        return std::numeric_limits<double>::infinity();
    const double scale = outer * std::pow(max_mode / 2.0, p);
    const double one_side = scale * std::pow(static_cast<double>(max_mode), 1.0 - p) / (p - 1.0);
    return 2.0 * 2.0 * one_side;
}

} // namespace detail

inline SymbolSeries symbol_series(const SymbolTriple& triple, int quadrature_points = kSeriesQuadraturePoints,
                                  int max_mode = kSeriesMaxMode)
{
    if (max_mode < 8 || 2 * max_mode >= quadrature_points)
        throw std::invalid_argument("symbol_series: need 8 <= max_mode < quadrature_points / 2");
    SymbolSeries s;
    s.max_mode = max_mode;
    Eigen::FFT<double> fft;
    const std::array<const CircleFunction*, 3> fns{&triple.f, &triple.g, &triple.h};
    for (int i = 0; i < 3; ++i) {
        std::vector<double> samples(quadrature_points);
        for (int j = 0; j < quadrature_points; ++j)
            samples[j] = (*fns[i])(static_cast<double>(j) / quadrature_points);
        std::vector<std::complex<double>> spectrum;
        fft.fwd(spectrum, samples);
        auto& mags = s.magnitudes[i];
        mags.resize(2 * max_mode + 1);
        for (int m = -max_mode; m <= max_mode; ++m)
            mags[m + max_mode] = std::abs(spectrum[(m + quadrature_points) % quadrature_points]) / quadrature_points;
        s.tail_beyond[i] = detail::fitted_tail(mags, max_mode);
    }
    return s;
}

struct ObstructionBound
{
    double epsilon_lower = 0.0;
    double gap_used = 0.0;
    double lip_const = 0.0;      // 1 + sum_{|m| <= truncation} |m| (|f^| + |g^| + |h^|)
    double tail_allowance = 0.0; // 2 * sum_{|m| > truncation} (|f^| + |g^| + |h^|)
    int truncation = 0;
    int index = 0;
};

// For any unitary pair within delta of (u, v):
//   |e(u', v') - e(u, v)| <= lip_const * delta + tail_allowance,
// so delta < (gap - tail_allowance) / lip_const keeps the spectrum away
// from 1/2 along the straight path between the two elements. The
// truncation is chosen to maximize that ratio.
inline ObstructionBound obstruction_lower_bound(const UnitaryMatrix& u, const UnitaryMatrix& v,
                                                const SymbolTriple& triple, const SymbolSeries& series,
                                                double gap_min = kDefaultGapMin)
{
    const IndexResult r = bott_index(u, v, triple, gap_min);
    ObstructionBound out;
    out.index = r.index;
    out.gap_used = r.gap;

    const int max_mode = series.max_mode;
    auto weight = [&](int m) {
        return series.magnitude(0, m) + series.magnitude(1, m) + series.magnitude(2, m);
    };
    const double beyond = series.tail_beyond[0] + series.tail_beyond[1] + series.tail_beyond[2];

    double lip = 1.0;
    double inside_tail = 0.0;
    for (int m = 1; m <= max_mode; ++m)
        inside_tail += weight(m) + weight(-m);

    double best = -std::numeric_limits<double>::infinity();
    for (int m = 0; m <= max_mode; ++m) {
        if (m > 0) {
            lip += m * (weight(m) + weight(-m));
            inside_tail -= weight(m) + weight(-m);
        }
        const double allowance = 2.0 * (std::max(0.0, inside_tail) + beyond);
        const double eps = (r.gap - allowance) / lip;
        if (eps > best) {
            best = eps;
            out.lip_const = lip;
            out.tail_allowance = allowance;
            out.truncation = m;
        }
    }
    out.epsilon_lower = r.index != 0 ? std::max(0.0, best) : 0.0;
    return out;
}

inline ObstructionBound obstruction_lower_bound(const UnitaryMatrix& u, const UnitaryMatrix& v,
                                                const SymbolTriple& triple, double gap_min = kDefaultGapMin)
{
    return obstruction_lower_bound(u, v, triple, symbol_series(triple), gap_min);
}

inline constexpr double kCommutingTol = 1e-10;

// u' = w diag(phases_u) w*, v' = w diag(phases_v) w*.
class CommutingPair
{
public:
    CommutingPair(UnitaryMatrix w, Eigen::VectorXcd phases_u, Eigen::VectorXcd phases_v)
        : w_(std::move(w)), phases_u_(std::move(phases_u)), phases_v_(std::move(phases_v))
    {
        if (phases_u_.size() != w_.dim() || phases_v_.size() != w_.dim())
            throw DimensionError("CommutingPair: phase count differs from dimension");
        for (Index i = 0; i < w_.dim(); ++i)
            if (std::abs(std::abs(phases_u_(i)) - 1.0) > 1e-12 || std::abs(std::abs(phases_v_(i)) - 1.0) > 1e-12)
                throw InvalidMatrix("CommutingPair: phases must have unit modulus");
        const double comm = operator_norm(commutator(u(), v()));
        if (comm > kCommutingTol)
            throw NumericalError("CommutingPair: reconstruction does not commute (" + std::to_string(comm) + ")");
    }

    const UnitaryMatrix& w() const noexcept { return w_; }
    const Eigen::VectorXcd& phases_u() const noexcept { return phases_u_; }
    const Eigen::VectorXcd& phases_v() const noexcept { return phases_v_; }

    UnitaryMatrix u() const { return rebuild(phases_u_); }
    UnitaryMatrix v() const { return rebuild(phases_v_); }

private:
    UnitaryMatrix rebuild(const Eigen::VectorXcd& phases) const
    {
        const Matrix& w = w_.matrix();
        return UnitaryMatrix(SquareMatrix(w * phases.asDiagonal() * w.adjoint()));
    }

    UnitaryMatrix w_;
    Eigen::VectorXcd phases_u_;
    Eigen::VectorXcd phases_v_;
};

struct NearestOptions
{
    int max_iters = 200; // Jacobi sweeps per restart
    int restarts = 8;
    std::uint64_t seed = 0;
    double rotation_tol = 1e-12;
};

struct NearestResult
{
    CommutingPair pair;
    double distance = 0.0; // max(|u - u'|, |v - v'|)
    bool converged = false;
    int restart = 0;
    int sweeps = 0;
};

namespace detail {

struct JacobiOutcome
{
    Matrix w;
    bool converged = false;
    int sweeps = 0;
};

// Off-diagonal Frobenius mass summed over the family.
inline double off_diagonal_mass(const std::vector<Matrix>& family)
{
    double mass = 0.0;
    for (const auto& a : family)
        mass += a.squaredNorm() - a.diagonal().squaredNorm();
    return mass;
}

inline constexpr double kJacobiStallTol = 1e-8;

// Stops when a sweep performs no rotation larger than tol, or when it lowers
// the off-diagonal mass by less than kJacobiStallTol relative to the total.
inline JacobiOutcome joint_diagonalize(std::vector<Matrix> family, Matrix w, int max_sweeps, double tol)
{
    const Index n = w.rows();
    JacobiOutcome out;
    double total = 0.0;
    for (auto& a : family) {
        a = w.adjoint() * a * w;
        total += a.squaredNorm();
    }
    double mass = off_diagonal_mass(family);

    for (out.sweeps = 0; out.sweeps < max_sweeps;) {
        ++out.sweeps;
        bool rotated = false;
        for (Index p = 0; p + 1 < n; ++p)
            for (Index q = p + 1; q < n; ++q) {
                Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
                for (const auto& a : family) {
                    const Eigen::Vector3d h(a(p, p).real() - a(q, q).real(), 2.0 * a(p, q).real(),
                                            2.0 * a(p, q).imag());
                    g += h * h.transpose();
                }
                Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
                es.computeDirect(g);
                Eigen::Vector3d top = es.eigenvectors().col(2);
                if (top(0) < 0.0)
                    top = -top;
                const double c = std::sqrt(0.5 * (1.0 + top(0)));
                const Complex s = Complex(top(1), -top(2)) / (2.0 * c);
                if (std::abs(s) <= tol)
                    continue;
                rotated = true;

                // a <- R* a R with R = [[c, -conj(s)], [s, c]] on (p, q).
                for (auto& a : family) {
                    const Eigen::VectorXcd cp = a.col(p), cq = a.col(q);
                    a.col(p) = c * cp + s * cq;
                    a.col(q) = -std::conj(s) * cp + c * cq;
                    const Eigen::RowVectorXcd rp = a.row(p), rq = a.row(q);
                    a.row(p) = c * rp + std::conj(s) * rq;
                    a.row(q) = -s * rp + c * rq;
                }
                const Eigen::VectorXcd wp = w.col(p), wq = w.col(q);
                w.col(p) = c * wp + s * wq;
                w.col(q) = -std::conj(s) * wp + c * wq;
            }
        const double next = off_diagonal_mass(family);
        const bool stalled = mass - next <= kJacobiStallTol * total;
        mass = next;
        if (!rotated || stalled) {
            out.converged = true;
            break;
        }
    }
    out.w = std::move(w);
    return out;
}

inline Eigen::VectorXcd unit_diagonal(const Matrix& a)
{
    Eigen::VectorXcd d = a.diagonal();
    for (Index i = 0; i < d.size(); ++i) {
        const double r = std::abs(d(i));
        d(i) = r > 1e-14 ? d(i) / r : Complex(1.0, 0.0);
    }
    return d;
}

inline std::vector<Matrix> hermitian_parts(const UnitaryMatrix& u, const UnitaryMatrix& v)
{
    const Complex i(0.0, 1.0);
    const Matrix& a = u.matrix();
    const Matrix& b = v.matrix();
    return {0.5 * (a + a.adjoint()), (a - a.adjoint()) / (2.0 * i), 0.5 * (b + b.adjoint()),
            (b - b.adjoint()) / (2.0 * i)};
}

} // namespace detail

// Starting bases are eigenbases of random real combinations of the
// Hermitian parts, so the search is covariant under simultaneous
// conjugation. Restart r draws from stream r of the seed; the reduction
// keeps the smallest distance, ties going to the lower restart id.
inline NearestResult nearest_commuting(const UnitaryMatrix& u, const UnitaryMatrix& v, const NearestOptions& opts = {})
{
    if (u.dim() != v.dim())
        throw DimensionError("nearest_commuting: u and v have different dimensions");
    if (opts.max_iters < 1 || opts.restarts < 1)
        throw std::invalid_argument("nearest_commuting: max_iters and restarts must be positive");

    const std::vector<Matrix> family = detail::hermitian_parts(u, v);
    std::vector<std::optional<NearestResult>> results(static_cast<std::size_t>(opts.restarts));

    parallel_for(results.size(), [&](std::size_t r) {
        Rng rng = make_rng(opts.seed, r);
        std::normal_distribution<double> normal(0.0, 1.0);
        Matrix start = Matrix::Zero(u.dim(), u.dim());
        for (const auto& a : family)
            start += normal(rng) * a;
        const HermitianSpectrum basis = eig_hermitian(HermitianMatrix(SquareMatrix(start)));

        detail::JacobiOutcome j =
            detail::joint_diagonalize(family, basis.eigenvectors.matrix(), opts.max_iters, opts.rotation_tol);
        const Matrix du = j.w.adjoint() * u.matrix() * j.w;
        const Matrix dv = j.w.adjoint() * v.matrix() * j.w;
        CommutingPair pair(UnitaryMatrix(SquareMatrix(j.w)), detail::unit_diagonal(du), detail::unit_diagonal(dv));
        const double distance = std::max(operator_norm(Matrix(u.matrix() - pair.u().matrix())),
                                         operator_norm(Matrix(v.matrix() - pair.v().matrix())));
        results[r] = NearestResult{std::move(pair), distance, j.converged, static_cast<int>(r), j.sweeps};
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < results.size(); ++r)
        if (results[r]->distance < results[best]->distance)
            best = r;
    return std::move(*results[best]);
}

struct EpsilonRow
{
    int n = 0;
    double heuristic_distance = 0.0;
    double epsilon_lower = 0.0;
    std::optional<int> index; // empty when the gap certificate fails
    double gap = 0.0;
    bool converged = false;
    bool sound = false; // heuristic_distance >= epsilon_lower
    std::string note;
};

// Per n: the clock u_n against the cyclic backward shift b_n.
inline std::vector<EpsilonRow> epsilon_sweep(const std::vector<int>& n_values, const SymbolTriple& triple,
                                             const NearestOptions& opts = {}, double gap_min = kDefaultGapMin)
{
    const SymbolSeries series = symbol_series(triple);
    std::vector<EpsilonRow> rows;
    rows.reserve(n_values.size());
    for (int n : n_values) {
        const UnitaryMatrix u = voiculescu_pair(n).first;
        const UnitaryMatrix b = cyclic_shift(n);
        EpsilonRow row;
        row.n = n;
        try {
            const ObstructionBound bound = obstruction_lower_bound(u, b, triple, series, gap_min);
            row.epsilon_lower = bound.epsilon_lower;
            row.index = bound.index;
            row.gap = bound.gap_used;
        }
        catch (const GapClosedError& e) {
            row.gap = e.gap();
            row.note = "gap certificate absent";
        }
        const NearestResult nearest = nearest_commuting(u, b, opts);
        row.heuristic_distance = nearest.distance;
        row.converged = nearest.converged;
        row.sound = row.heuristic_distance >= row.epsilon_lower;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace bottlab
