#pragma once

// Reference computations used only by the tests. Each one takes a route
// that shares no code with the library routine it checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
inline constexpr double kPi = std::numbers::pi;

// sqrt of the top eigenvalue of M*M by power iteration from a fixed start.
inline double power_iteration_norm(const Matrix& m, int iterations = 5000)
{
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> normal;
    Eigen::VectorXcd x(m.cols());
    for (auto& c : x)
        c = Complex(normal(rng), normal(rng));
    x.normalize();
    const Matrix gram = m.adjoint() * m;
    double lambda = 0.0;
    for (int i = 0; i < iterations; ++i) {
        Eigen::VectorXcd y = gram * x;
        const double n = y.norm();
        if (n == 0.0)
            return 0.0;
        lambda = x.dot(y).real();
        x = y / n;
    }
    return std::sqrt(std::max(0.0, lambda));
}

// max_j |C e_j|; equals the operator norm when C maps the standard basis
// to mutually orthogonal vectors (weighted permutations).
inline double max_column_norm(const Matrix& c)
{
    double best = 0.0;
    for (Eigen::Index j = 0; j < c.cols(); ++j)
        best = std::max(best, c.col(j).norm());
    return best;
}

// Default symbols written from their closed forms in terms of sin.
inline double f_closed(double x) { return std::pow(std::cos(kPi * x), 2); }
inline double root_closed(double x) { return std::abs(std::sin(2.0 * kPi * x)) / 2.0; }
inline double g_closed(double x) { return x <= 0.5 ? root_closed(x) : 0.0; }
inline double h_closed(double x) { return x >= 0.5 ? root_closed(x) : 0.0; }

// sum_m S^m (x) a_m on modes [m_min, m_max], with S^m the truncated shift
// delta_n -> delta_{n+m} built entry by entry.
inline Matrix multiplication_by_kronecker(const std::vector<std::pair<int, Matrix>>& coeffs, int m_min, int m_max)
{
    const int w = m_max - m_min + 1;
    const auto k = coeffs.front().second.rows();
    Matrix out = Matrix::Zero(w * k, w * k);
    for (const auto& [mode, a] : coeffs) {
        Matrix shift = Matrix::Zero(w, w);
        for (int n = m_min; n <= m_max; ++n)
            if (n + mode >= m_min && n + mode <= m_max)
                shift(n + mode - m_min, n - m_min) = 1.0;
        out += Eigen::kroneckerProduct(shift, a).eval();
    }
    return out;
}

// Minimum over commuting 2x2 unitary pairs of max(|u - u'|, |v - v'|).
// The common eigenbasis w runs over the Bloch sphere; for fixed w the two
// phase pairs are optimized separately since the objectives decouple.
// Every search is a grid followed by local grid refinement.
namespace detail {

inline double spectral_norm_2x2(const Eigen::Matrix2cd& d)
{
    return Eigen::JacobiSVD<Eigen::Matrix2cd>(d).singularValues()(0);
}

inline double best_phase_distance(const Eigen::Matrix2cd& a)
{
    auto score = [&](double s, double t) {
        Eigen::Matrix2cd d = a;
        d(0, 0) -= std::polar(1.0, s);
        d(1, 1) -= std::polar(1.0, t);
        return spectral_norm_2x2(d);
    };
    constexpr int coarse = 24;
    double step = 2.0 * kPi / coarse;
    double bs = 0.0, bt = 0.0, best = 1e300;
    for (int i = 0; i < coarse; ++i)
        for (int j = 0; j < coarse; ++j)
            if (const double v = score(i * step, j * step); v < best) {
                best = v;
                bs = i * step;
                bt = j * step;
            }
    for (int round = 0; round < 6; ++round) {
        const double cs = bs, ct = bt;
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j)
                if (const double v = score(cs + i * step / 4, ct + j * step / 4); v < best) {
                    best = v;
                    bs = cs + i * step / 4;
                    bt = ct + j * step / 4;
                }
        step /= 4;
    }
    return best;
}

inline Eigen::Matrix2cd bloch_basis(double theta, double phi)
{
    Eigen::Matrix2cd w;
    w << std::cos(theta / 2), -std::polar(std::sin(theta / 2), -phi), std::polar(std::sin(theta / 2), phi),
        std::cos(theta / 2);
    return w;
}

} // namespace detail

inline double nearest_commuting_2x2(const Matrix& u, const Matrix& v)
{
    const Eigen::Matrix2cd u2 = u, v2 = v;
    auto score = [&](double theta, double phi) {
        const Eigen::Matrix2cd w = detail::bloch_basis(theta, phi);
        return std::max(detail::best_phase_distance(w.adjoint() * u2 * w),
                        detail::best_phase_distance(w.adjoint() * v2 * w));
    };
    constexpr int coarse = 24;
    std::vector<std::pair<double, std::pair<double, double>>> candidates;
    for (int i = 0; i <= coarse; ++i)
        for (int j = 0; j < 2 * coarse; ++j) {
            const double theta = kPi * i / coarse, phi = kPi * j / coarse;
            candidates.push_back({score(theta, phi), {theta, phi}});
        }
    std::sort(candidates.begin(), candidates.end());
    double best = candidates.front().first;
    for (std::size_t c = 0; c < std::min<std::size_t>(8, candidates.size()); ++c) {
        auto [theta, phi] = candidates[c].second;
        double local = candidates[c].first;
        double step = kPi / coarse;
        for (int round = 0; round < 5; ++round) {
            const double ct = theta, cp = phi;
            for (int i = -3; i <= 3; ++i)
                for (int j = -3; j <= 3; ++j)
                    if (const double v = score(ct + i * step / 3, cp + j * step / 3); v < local) {
                        local = v;
                        theta = ct + i * step / 3;
                        phi = cp + j * step / 3;
                    }
            step /= 3;
        }
        best = std::min(best, local);
    }
    return best;
}

// 3 int_0^1 (l - l^2) dl.
inline constexpr double kCubicTraceLimit = 0.5;

// Winding of z -> prod_j z^{m_j} is sum_j m_j.
inline int winding_of_monomials(const std::vector<int>& modes)
{
    int total = 0;
    for (int m : modes)
        total += m;
    return total;
}

} // namespace oracle
