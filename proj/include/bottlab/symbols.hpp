#pragma once

// The symbol triple (f, g, h) feeding the Loring element. Functions are
// parametrized by the circle coordinate x in [0,1), i.e. the point
// exp(2 pi i x); x = 0 is the base point z = 1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace bottlab {

using CircleFunction = std::function<double(double)>;

inline constexpr double kSymbolTol = 1e-10;
inline constexpr double kLipschitzSafety = 1.1;
inline constexpr int kDefaultSymbolGrid = 10000;

inline double wrap_unit(double x)
{
    x -= std::floor(x);
    return x >= 1.0 ? 0.0 : x;
}

struct SymbolTriple
{
    CircleFunction f;
    CircleFunction g;
    CircleFunction h;
    double lipschitz_f = 0.0;
    double lipschitz_g = 0.0;
    double lipschitz_h = 0.0;
};

// Grid estimate of the Lipschitz constant of k with respect to the circle
// coordinate x (so z -> z has constant 2 pi), inflated by the 1.1 safety
// factor. The wrap-around step from the last grid point back to x = 0 is
// included.
template <typename Fn>
double lipschitz_bound(Fn&& k, int grid_size)
{
    if (grid_size < 2)
        throw std::invalid_argument("lipschitz_bound: grid_size must be >= 2");
    const double step = 1.0 / grid_size;
    double worst = 0.0;
    auto previous = std::complex<double>(k(0.0));
    const auto first = previous;
    for (int i = 1; i <= grid_size; ++i) {
        const auto current = i == grid_size ? first : std::complex<double>(k(i * step));
        worst = std::max(worst, std::abs(current - previous) / step);
        previous = current;
    }
    return worst * kLipschitzSafety;
}

inline SymbolTriple certify(SymbolTriple t, int grid_size = kDefaultSymbolGrid)
{
    t.lipschitz_f = lipschitz_bound(t.f, grid_size);
    t.lipschitz_g = lipschitz_bound(t.g, grid_size);
    t.lipschitz_h = lipschitz_bound(t.h, grid_size);
    return t;
}

// f(x) = (1 + cos 2 pi x)/2, with sqrt(f - f^2) split between g on [0,1/2]
// and h on [1/2,1).
inline SymbolTriple default_triple()
{
    auto f = [](double x) { return 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * wrap_unit(x))); };
    auto root = [f](double x) {
        const double v = f(x);
        return std::sqrt(std::max(0.0, v - v * v));
    };
    SymbolTriple t;
    t.f = f;
    t.g = [root](double x) {
        x = wrap_unit(x);
        return x <= 0.5 ? root(x) : 0.0;
    };
    t.h = [root](double x) {
        x = wrap_unit(x);
        return x >= 0.5 ? root(x) : 0.0;
    };
    return certify(std::move(t));
}

inline SymbolTriple constant_triple(double f_value, double g_value = 0.0, double h_value = 0.0)
{
    SymbolTriple t;
    t.f = [f_value](double) { return f_value; };
    t.g = [g_value](double) { return g_value; };
    t.h = [h_value](double) { return h_value; };
    return certify(std::move(t));
}

struct ValidationReport
{
    int grid_size = 0;
    double identity_violation = 0.0;  // max |f^2 + g^2 + h^2 - f|
    double product_violation = 0.0;   // max |g h|
    double basepoint_violation = 0.0; // max(|f(0) - 1|, |g(0)|, |h(0)|)
    double range_violation = 0.0;     // max distance of f, g, h from [0,1]
    bool passed = false;
};

inline ValidationReport validate_triple(const SymbolTriple& t, int grid_size)
{
    if (grid_size < 2)
        throw std::invalid_argument("validate_triple: grid_size must be >= 2");
    auto outside_unit = [](double v) { return std::max({0.0, -v, v - 1.0}); };

    ValidationReport r;
    r.grid_size = grid_size;
    for (int i = 0; i < grid_size; ++i) {
        const double x = static_cast<double>(i) / grid_size;
        const double f = t.f(x), g = t.g(x), h = t.h(x);
        r.identity_violation = std::max(r.identity_violation, std::abs(f * f + g * g + h * h - f));
        r.product_violation = std::max(r.product_violation, std::abs(g * h));
        r.range_violation = std::max({r.range_violation, outside_unit(f), outside_unit(g), outside_unit(h)});
    }
    r.basepoint_violation = std::max({std::abs(t.f(0.0) - 1.0), std::abs(t.g(0.0)), std::abs(t.h(0.0))});
    r.passed = r.identity_violation <= kSymbolTol && r.product_violation <= kSymbolTol &&
               r.basepoint_violation <= kSymbolTol && r.range_violation <= kSymbolTol;
    return r;
}

} // namespace bottlab
