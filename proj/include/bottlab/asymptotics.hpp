#pragma once

// Finite-N reproduction of the trace computation for e_N = e(u_N, b_N):
//
//   Step 1   |chi(e) - e| <= 2 |e^2 - e| = O(1/N)
//   Step 2   tr chi(e) - tr(3 e^2 - 2 e^3) -> 0
//   Step 3   tr e^2 = N exactly
//   Step 4   tr e^3 - (N - 1/2) -> 0
//
// so that tr chi(e) - N -> 3N - 2(N - 1/2) - N = 1.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bottlab/loring.hpp"
#include "bottlab/matrix_core.hpp"
#include "bottlab/model.hpp"
#include "bottlab/parallel.hpp"
#include "bottlab/symbols.hpp"

namespace bottlab {

struct SweepRecord
{
    int N = 0;
    double tr_e = 0.0;
    double tr_e2 = 0.0;
    double tr_e3 = 0.0;
    double norm_chi_minus_e = 0.0;
    double norm_e2_minus_e = 0.0;
    double gap = 0.0; // 0 when the gap certificate fails
    double raw_index = 0.0;
    std::optional<int> index; // empty when the gap certificate fails
    bool flagged = false;
    std::string note;

    double trace_chi() const { return raw_index + N; }
};

inline constexpr double kExactTraceTol = 1e-8;
inline constexpr int kCalibrationN = 8;
inline constexpr double kCalibrationFactor = 1.5;
inline constexpr double kMonotoneSlack = 1.2;

// e(u_N, b_N) with u_N the clock on modes 0..N-1 and b_N the cyclic
// backward shift.
inline LoringElement clock_shift_element(int N, const SymbolTriple& triple)
{
    return loring_element(u_t_operator(N, TruncatedFourierSpace(0, N - 1)), cyclic_shift(N), triple);
}

inline SweepRecord sweep_row(int N, const SymbolTriple& triple, double gap_min = kDefaultGapMin)
{
    if (N < 2)
        throw std::invalid_argument("sweep: N must be >= 2");
    const LoringElement element = clock_shift_element(N, triple);
    const Matrix& e = element.matrix().matrix();
    const HermitianSpectrum spec = eig_hermitian(element.matrix());
    const Matrix chi = apply_function(spec, detail::chi_half).matrix();
    const Matrix e2 = e * e;

    SweepRecord r;
    r.N = N;
    r.tr_e = e.trace().real();
    r.tr_e2 = e2.trace().real();
    r.tr_e3 = e2.cwiseProduct(e.transpose()).sum().real();
    r.norm_e2_minus_e = operator_norm(HermitianMatrix(SquareMatrix(e2 - e)));
    r.norm_chi_minus_e = operator_norm(HermitianMatrix(SquareMatrix(chi - e)));
    r.raw_index = chi.trace().real() - N;

    const double gap = spectral_gap_at_half(spec);
    if (gap > gap_min) {
        r.gap = gap;
        const int rounded = static_cast<int>(std::lround(r.raw_index));
        if (std::abs(r.raw_index - rounded) <= kIndexSlack)
            r.index = rounded;
        else {
            r.flagged = true;
            r.note = "raw index not within 0.01 of an integer";
        }
    }
    else {
        r.flagged = true;
        r.note = "spectral gap " + std::to_string(gap) + " <= gap_min";
    }
    return r;
}

// Rows are independent and computed in parallel; output order follows
// N_values.
inline std::vector<SweepRecord> sweep(const std::vector<int>& N_values, const SymbolTriple& triple,
                                      double gap_min = kDefaultGapMin)
{
    std::vector<SweepRecord> rows(N_values.size());
    parallel_for(N_values.size(), [&](std::size_t i) { rows[i] = sweep_row(N_values[i], triple, gap_min); });
    return rows;
}

// C_cap bounds N |chi(e) - e|; D bounds N |tr chi(e) - tr(3e^2 - 2e^3)| / 2.
struct StepConstants
{
    double c_cap = 0.0;
    double d_const = 0.0;
};

inline double step2_deviation(const SweepRecord& r)
{
    return std::abs(r.trace_chi() - (3.0 * r.tr_e2 - 2.0 * r.tr_e3));
}

inline StepConstants calibrate_step_constants(const SymbolTriple& triple, int N = kCalibrationN)
{
    const SweepRecord r = sweep_row(N, triple);
    return {kCalibrationFactor * N * r.norm_chi_minus_e, kCalibrationFactor * N * step2_deviation(r) / 2.0};
}

// Calibration of the default triple at N = 8, frozen.
inline constexpr StepConstants kFrozenStepConstants{3.37790385330707, 0.568019484660542};

inline bool step1_check(const SweepRecord& r, const StepConstants& c = kFrozenStepConstants)
{
    return r.norm_chi_minus_e <= 2.0 * r.norm_e2_minus_e + 1e-10 && r.N * r.norm_chi_minus_e <= c.c_cap;
}

inline bool step2_check(const SweepRecord& r, const StepConstants& c = kFrozenStepConstants)
{
    return step2_deviation(r) <= 2.0 * c.d_const / r.N;
}

inline bool step3_check(const SweepRecord& r) { return std::abs(r.tr_e2 - r.N) <= kExactTraceTol; }

inline double step4_deviation(const SweepRecord& r) { return std::abs(r.tr_e3 - (r.N - 0.5)); }

// 3 sum_k h(x_k)^2 (f(x_k) - f(x_{k-1})), x_k = k/N: the matrix-free value
// of tr e^2 - tr e^3.
inline double step4_riemann_sum(const SymbolTriple& triple, int N)
{
    double sum = 0.0;
    for (int k = 0; k < N; ++k) {
        const double x = static_cast<double>(k) / N;
        const double h = triple.h(x);
        sum += h * h * (triple.f(x) - triple.f(static_cast<double>(k - 1) / N));
    }
    return 3.0 * sum;
}

// 3 * int_0^1 (lambda - lambda^2) d lambda by composite Simpson.
inline double step4_lambda_integral(int intervals = 64)
{
    intervals += intervals % 2;
    const double step = 1.0 / intervals;
    auto integrand = [](double l) { return l - l * l; };
    double sum = integrand(0.0) + integrand(1.0);
    for (int i = 1; i < intervals; ++i)
        sum += (i % 2 ? 4.0 : 2.0) * integrand(i * step);
    return 3.0 * (step / 3.0) * sum;
}

inline constexpr int kRiemannCheckN = 512;
inline constexpr double kRiemannTol = 0.02;
inline constexpr double kStep4FinalTol = 0.05;
inline constexpr int kStep4FinalMinN = 128;

struct Step4Report
{
    bool monotone = true;
    bool final_within_tol = true;
    double final_deviation = 0.0;
    double riemann_sum = 0.0;
    bool riemann_within_tol = false;
    bool passed = false;
};

// Records must be ordered by increasing N.
inline Step4Report step4_check(const std::vector<SweepRecord>& records, const SymbolTriple& triple)
{
    Step4Report rep;
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].N <= records[i - 1].N)
            throw std::invalid_argument("step4_check: records must have increasing N");
        if (step4_deviation(records[i]) > kMonotoneSlack * step4_deviation(records[i - 1]))
            rep.monotone = false;
    }
    if (!records.empty()) {
        rep.final_deviation = step4_deviation(records.back());
        if (records.back().N >= kStep4FinalMinN)
            rep.final_within_tol = rep.final_deviation <= kStep4FinalTol;
    }
    rep.riemann_sum = step4_riemann_sum(triple, kRiemannCheckN);
    rep.riemann_within_tol = std::abs(rep.riemann_sum - 0.5) <= kRiemannTol;
    rep.passed = rep.monotone && rep.final_within_tol && rep.riemann_within_tol;
    return rep;
}

struct CommutatorBound
{
    double commutator_norm = 0.0;
    double bound = 0.0;
    bool passed = false;
};

// |[k(u_N), b_N]| <= 2 pi Lip(k) / N * 1.1.
template <typename Fn>
CommutatorBound lipschitz_commutator_check(Fn&& k, int N, int grid_size = kDefaultSymbolGrid)
{
    const UnitaryMatrix u = u_t_operator(N, TruncatedFourierSpace(0, N - 1));
    const SquareMatrix ku = apply_function_unitary(u, k);
    CommutatorBound r;
    r.commutator_norm = operator_norm(commutator(ku, cyclic_shift(N).square()));
    r.bound = 2.0 * std::numbers::pi * lipschitz_bound(k, grid_size) / N * kLipschitzSafety;
    r.passed = r.commutator_norm <= r.bound;
    return r;
}

inline constexpr const char* kSweepCsvHeader =
    "N,tr_e,tr_e2,tr_e3,norm_chi_minus_e,norm_e2_minus_e,gap,raw_index,index";

inline std::string format_g12(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// Undefined indices are written as an empty field.
inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& rows)
{
    out << kSweepCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.N << ',' << format_g12(r.tr_e) << ',' << format_g12(r.tr_e2) << ',' << format_g12(r.tr_e3) << ','
            << format_g12(r.norm_chi_minus_e) << ',' << format_g12(r.norm_e2_minus_e) << ','
            << format_g12(r.gap) << ',' << format_g12(r.raw_index) << ',';
        if (r.index)
            out << *r.index;
        out << '\n';
    }
}

} // namespace bottlab
