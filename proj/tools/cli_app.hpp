#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bottlab/bottlab.hpp"

namespace bottlab::cli {

enum ExitCode : int {
    kOk = 0,
    kSymbolViolation = 2,
    kCheckFailure = 3,
    kGapClosed = 4,
    kUsage = 64,
    kData = 65,
};

struct RunConfig
{
    std::uint64_t seed = 0;
    double gap_min = kDefaultGapMin;
    std::string format = "csv";
    std::string output_path;

    int grid = kDefaultSymbolGrid;
    std::optional<double> fconst;

    std::vector<int> n_list{8, 16, 32, 64, 128};

    std::string loop_path;
    double t = 24.0;

    int k = 4;
    std::vector<int> ranks{0, 1, 2, 3};
    int per_rank = 10;

    int n = 16;
    int restarts = 8;
    int max_iters = 200;
    bool commuting_test = false;
};

namespace detail {

inline std::string g12(double x) { return format_g12(x); }

inline std::string header(const std::string& command, std::uint64_t seed)
{
    return "# bottlab " + command + " seed=" + std::to_string(seed);
}

inline int cmd_verify_symbols(const RunConfig& cfg, std::ostream& out)
{
    SymbolTriple triple = default_triple();
    if (cfg.fconst) {
        const double c = *cfg.fconst;
        triple.f = [c](double) { return c; };
    }
    const ValidationReport r = validate_triple(triple, cfg.grid);
    out << header("verify-symbols", cfg.seed) << '\n'
        << "grid_size " << r.grid_size << '\n'
        << "identity_violation " << g12(r.identity_violation) << '\n'
        << "product_violation " << g12(r.product_violation) << '\n'
        << "basepoint_violation " << g12(r.basepoint_violation) << '\n'
        << "range_violation " << g12(r.range_violation) << '\n'
        << "lipschitz_f " << g12(triple.lipschitz_f) << '\n'
        << "lipschitz_g " << g12(triple.lipschitz_g) << '\n'
        << "lipschitz_h " << g12(triple.lipschitz_h) << '\n'
        << "status " << (r.passed ? "pass" : "fail") << '\n';
    return r.passed ? kOk : kSymbolViolation;
}

// Rows below the calibration size only warn: the gap at 1/2 may close there.
inline int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    for (int N : cfg.n_list)
        if (N < 2) {
            err << "sweep: N must be >= 2 (got " << N << ")\n";
            return kUsage;
        }
    std::vector<int> sizes = cfg.n_list;
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    const SymbolTriple triple = default_triple();
    const std::vector<SweepRecord> rows = sweep(sizes, triple, cfg.gap_min);
    err << header("sweep", cfg.seed) << '\n';

    bool failed = false;
    std::vector<SweepRecord> tail;
    for (const auto& r : rows) {
        std::vector<std::string> problems;
        if (!step3_check(r))
            problems.push_back("tr e^2 differs from N");
        if (std::abs(r.tr_e - r.N) > kExactTraceTol)
            problems.push_back("tr e differs from N");
        if (!step1_check(r))
            problems.push_back("|chi(e) - e| exceeds its bound");
        if (!step2_check(r))
            problems.push_back("tr chi(e) - tr(3e^2 - 2e^3) exceeds its bound");
        if (!r.index)
            problems.push_back(r.note);
        else if (*r.index != 1)
            problems.push_back("index " + std::to_string(*r.index) + " differs from 1");

        const bool binding = r.N >= kCalibrationN;
        for (const auto& p : problems)
            err << (binding ? "FAIL" : "warning") << " N=" << r.N << ": " << p << '\n';
        failed = failed || (binding && !problems.empty());
        if (r.N >= 2 * kCalibrationN)
            tail.push_back(r);
    }
    if (!tail.empty()) {
        const Step4Report s4 = step4_check(tail, triple);
        if (!s4.passed) {
            failed = true;
            err << "FAIL step4: monotone=" << s4.monotone << " final_deviation=" << g12(s4.final_deviation)
                << " riemann_sum=" << g12(s4.riemann_sum) << '\n';
        }
    }

    std::ofstream file;
    if (!cfg.output_path.empty()) {
        file.open(cfg.output_path, std::ios::binary);
        if (!file) {
            err << "sweep: cannot write " << cfg.output_path << '\n';
            return kData;
        }
    }
    std::ostream& sink = cfg.output_path.empty() ? out : file;
    if (cfg.format == "json")
        sink << sweep_to_json(rows).dump(2) << '\n';
    else
        write_sweep_csv(sink, rows);
    return failed ? kCheckFailure : kOk;
}

inline int cmd_pairing(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    std::ifstream in(cfg.loop_path);
    if (!in) {
        err << "pairing: cannot read " << cfg.loop_path << '\n';
        return kUsage;
    }
    try {
        const LoopUnitary loop = loop_from_json(in);
        const PairingResult p = pairing_index(loop, cfg.t, default_triple(), PairingOptions{cfg.gap_min});
        out << header("pairing", cfg.seed) << '\n'
            << "t " << g12(cfg.t) << '\n'
            << "k " << loop.k() << '\n'
            << "degree " << loop.degree() << '\n'
            << "window " << p.window.m_min() << ' ' << p.window.m_max() << '\n'
            << "index " << p.result.index << '\n'
            << "gap " << g12(p.result.gap) << '\n'
            << "defect " << g12(p.result.defect) << '\n'
            << "raw_trace " << g12(p.result.raw_trace) << '\n';
        return kOk;
    }
    catch (const LoopFormatError& e) {
        err << e.what() << '\n';
        return kUsage;
    }
    catch (const NotAUnitaryLoop& e) {
        err << e.what() << '\n';
        return kData;
    }
    catch (const GapClosedError& e) {
        err << e.what() << "\nhint: raise --t so that the loop varies slowly on the rotated modes\n";
        return kGapClosed;
    }
}

inline int cmd_roundtrip(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    if (cfg.k < 1 || cfg.per_rank < 1) {
        err << "roundtrip: --k and --per-rank must be positive\n";
        return kUsage;
    }
    for (int r : cfg.ranks)
        if (r < 0 || r > cfg.k) {
            err << "roundtrip: rank " << r << " outside [0, k]\n";
            return kUsage;
        }
    const SymbolTriple triple = default_triple();
    Rng rng = make_rng(cfg.seed, 0);
    out << header("roundtrip", cfg.seed) << '\n' << "k " << cfg.k << " t " << g12(cfg.t) << '\n';
    bool failed = false;
    for (int rank : cfg.ranks) {
        int passed = 0;
        for (int i = 0; i < cfg.per_rank; ++i) {
            const ProjectionMatrix p(random_projection_matrix(cfg.k, rank, rng));
            try {
                const int index = pairing_index(bott_loop(p), cfg.t, triple, PairingOptions{cfg.gap_min}).result.index;
                if (index == rank)
                    ++passed;
                else
                    err << "FAIL rank " << rank << " sample " << i << ": pairing " << index << '\n';
            }
            catch (const Error& e) {
                err << "FAIL rank " << rank << " sample " << i << ": " << e.what() << '\n';
            }
        }
        out << "rank " << rank << " passed " << passed << '/' << cfg.per_rank << '\n';
        failed = failed || passed != cfg.per_rank;
    }
    out << "status " << (failed ? "fail" : "pass") << '\n';
    return failed ? kCheckFailure : kOk;
}

// Default input: the clock u_n and the cyclic backward shift b_n. With
// --commuting-test the shift is replaced by a function of the clock
// conjugated into a random basis together with it.
inline int cmd_nearest(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    if (cfg.n < 2 || cfg.restarts < 1 || cfg.max_iters < 1) {
        err << "nearest: need --n >= 2 and positive --restarts, --max-iters\n";
        return kUsage;
    }
    UnitaryMatrix u = voiculescu_pair(cfg.n).first;
    UnitaryMatrix v = cyclic_shift(cfg.n);
    if (cfg.commuting_test) {
        Rng rng = make_rng(cfg.seed, 0);
        const Matrix w = random_unitary(cfg.n, rng).matrix();
        const Matrix d = u.matrix();
        u = UnitaryMatrix(SquareMatrix(w * d * w.adjoint()));
        v = UnitaryMatrix(SquareMatrix(w * d * d * d * w.adjoint()));
    }

    NearestOptions opts;
    opts.max_iters = cfg.max_iters;
    opts.restarts = cfg.restarts;
    opts.seed = cfg.seed;
    const NearestResult r = nearest_commuting(u, v, opts);

    const SymbolTriple triple = default_triple();
    double eps = 0.0;
    std::string index = "undefined";
    std::string gap;
    try {
        const ObstructionBound b = obstruction_lower_bound(u, v, triple, cfg.gap_min);
        eps = b.epsilon_lower;
        index = std::to_string(b.index);
        gap = g12(b.gap_used);
    }
    catch (const GapClosedError& e) {
        gap = g12(e.gap()) + " (closed)";
    }
    const bool sound = r.distance >= eps;
    out << header("nearest", cfg.seed) << '\n'
        << "n " << cfg.n << '\n'
        << "input " << (cfg.commuting_test ? "commuting-test" : "clock-shift") << '\n'
        << "heuristic_distance " << g12(r.distance) << '\n'
        << "converged " << (r.converged ? "true" : "false") << '\n'
        << "best_restart " << r.restart << '\n'
        << "epsilon_lower " << g12(eps) << '\n'
        << "index " << index << '\n'
        << "gap " << gap << '\n'
        << "status " << (sound ? "pass" : "fail") << '\n';
    if (!sound)
        err << "FAIL heuristic distance below certified lower bound\n";
    return sound ? kOk : kCheckFailure;
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Almost-commuting unitaries, Bott indices and pairings", "bottlab"};
    app.require_subcommand(1);
    app.add_option("--seed", cfg.seed, "Seed for all random draws")->default_val(0);

    auto* verify = app.add_subcommand("verify-symbols", "Check the identities of the default symbol triple");
    verify->add_option("--grid", cfg.grid, "Grid size")->check(CLI::Range(2, 100000000));
    verify->add_option("--fconst", cfg.fconst, "Replace f by a constant (test hook)")->group("");

    auto* sweep_cmd = app.add_subcommand("sweep", "Trace statistics of e(u_N, b_N) over N");
    sweep_cmd->add_option("--n-list", cfg.n_list, "Sizes N")->delimiter(',');
    sweep_cmd->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_option("--output", cfg.output_path, "Write the table here instead of stdout");
    sweep_cmd->add_option("--gap-min", cfg.gap_min, "Required spectral gap at 1/2");

    auto* pairing_cmd = app.add_subcommand("pairing", "Pair u_t with a loop read from JSON");
    pairing_cmd->add_option("--loop", cfg.loop_path, "Loop JSON file")->required();
    pairing_cmd->add_option("--t", cfg.t, "Rotation parameter t >= 1")->check(CLI::Range(1.0, 1e6));
    pairing_cmd->add_option("--gap-min", cfg.gap_min, "Required spectral gap at 1/2");

    auto* roundtrip_cmd = app.add_subcommand("roundtrip", "Pairing of Bott loops of random projections");
    roundtrip_cmd->add_option("--k", cfg.k, "Matrix size");
    roundtrip_cmd->add_option("--ranks", cfg.ranks, "Projection ranks")->delimiter(',');
    roundtrip_cmd->add_option("--t", cfg.t, "Rotation parameter t >= 1")->check(CLI::Range(1.0, 1e6));
    roundtrip_cmd->add_option("--per-rank", cfg.per_rank, "Random projections per rank");
    roundtrip_cmd->add_option("--gap-min", cfg.gap_min, "Required spectral gap at 1/2");

    auto* nearest_cmd = app.add_subcommand("nearest", "Nearest commuting pair versus the index bound");
    nearest_cmd->add_option("--n", cfg.n, "Matrix size");
    nearest_cmd->add_option("--restarts", cfg.restarts, "Random restarts");
    nearest_cmd->add_option("--max-iters", cfg.max_iters, "Jacobi sweeps per restart");
    nearest_cmd->add_option("--gap-min", cfg.gap_min, "Required spectral gap at 1/2");
    nearest_cmd->add_flag("--commuting-test", cfg.commuting_test, "Use an exactly commuting input");

    for (auto* sub : {verify, sweep_cmd, pairing_cmd, roundtrip_cmd, nearest_cmd})
        sub->add_option("--seed", cfg.seed, "Seed for all random draws");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    }
    catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << "run with --help for the list of commands\n";
        return kUsage;
    }

    try {
        if (verify->parsed())
            return detail::cmd_verify_symbols(cfg, out);
        if (sweep_cmd->parsed())
            return detail::cmd_sweep(cfg, out, err);
        if (pairing_cmd->parsed())
            return detail::cmd_pairing(cfg, out, err);
        if (roundtrip_cmd->parsed())
            return detail::cmd_roundtrip(cfg, out, err);
        return detail::cmd_nearest(cfg, out, err);
    }
    catch (const GapClosedError& e) {
        err << e.what() << '\n';
        return kGapClosed;
    }
    catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }
    catch (const Error& e) {
        err << "check failed: " << e.what() << '\n';
        return kCheckFailure;
    }
}

} // namespace bottlab::cli
