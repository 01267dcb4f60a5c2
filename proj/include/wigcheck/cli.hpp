#pragma once

// Command dispatch behind the wigcheck binary. Exit codes:
//   0  legitimate-up-to-N / no-PT-witness / clean dump
//   1  illegitimate-certified / entangled-certified / negative found
//   2  inconclusive
//   64 usage error
//   65 input-format error

#include <cstdint>
#include <ostream>
#include <string>

#include "wigcheck/elliptical.hpp"
#include "wigcheck/report.hpp"
#include "wigcheck/spec_io.hpp"

namespace wigcheck {

enum class Command { check, eigs, klm, entangle, coeffs, convert };

enum class MatrixRoute { lambda_integral, alpha_integral, laguerre };

struct RunConfig {
    Command command = Command::check;
    std::string input;
    int truncation = -1; // -1: per-command default
    double tolerance = std::numeric_limits<double>::quiet_NaN();
    MatrixRoute route = MatrixRoute::lambda_integral;
    KlmStrategy strategy = KlmStrategy::grid;
    long budget = 20000;
    int klm_n = 3;
    std::uint64_t seed = 1;
    OutputFormat format = OutputFormat::text;
    bool dump_table = false;
    bool dump_charfn = false;
    int escalate_from = -1; // -1: min(8, truncation)
};

inline constexpr int kExitLegit = 0;
inline constexpr int kExitCertified = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitFormat = 65;

namespace detail {

inline LegitimacyReport check_via_laguerre(const DistributionSpec& spec, int n_start, int n_max, double tolerance) {
    const CharacteristicFunction cf = characteristic(spec);
    LegitimacyReport last;
    for (int n : escalation_steps(n_start, n_max)) {
        const QuasiDensityMatrix m = build_matrix_laguerre(cf, n);
        const double tol = std::isnan(tolerance) ? default_psd_tolerance(m) : tolerance;
        LegitimacyReport rep = psd_verdict(m, tol);
        rep.trajectory = std::move(last.trajectory);
        rep.trajectory.emplace_back(n, rep.min_eigenvalue);
        last = std::move(rep);
        if (last.verdict == Verdict::illegitimate_certified) break;
    }
    last.normalization = check_normalization(spec).value;
    return last;
}

inline int run_check(const RunConfig& cfg, const DistributionSpec& spec, std::ostream& out) {
    const int n_max = cfg.truncation >= 0 ? cfg.truncation : 16;
    const int n_start = cfg.escalate_from >= 0 ? cfg.escalate_from : std::min(8, n_max);
    LegitimacyReport rep;
    if (cfg.route == MatrixRoute::laguerre) {
        if (spec.modes != 1) throw usage_error("check: laguerre route is single-mode only");
        rep = check_via_laguerre(spec, n_start, n_max, cfg.tolerance);
    } else {
        rep = escalate(spec, n_start, n_max, cfg.tolerance,
                       cfg.route == MatrixRoute::alpha_integral ? Route::alpha_integral : Route::lambda_integral);
    }
    write_report(out, rep, cfg.format);
    if (cfg.dump_table && cfg.route != MatrixRoute::laguerre) {
        const CharacteristicFunction cf = characteristic(spec);
        const CoefficientTable table = cfg.route == MatrixRoute::alpha_integral
                                           ? coefficients_alpha_route(spec, n_max)
                                           : coefficients_lambda_route(cf, n_max);
        write_table_dump(out, table);
    }
    if (cfg.dump_charfn) write_charfn_dump(out, characteristic(spec));
    switch (rep.verdict) {
        case Verdict::illegitimate_certified: return kExitCertified;
        case Verdict::legitimate_up_to_N: return kExitLegit;
        case Verdict::inconclusive: return kExitInconclusive;
    }
    return kExitInconclusive;
}

inline int run_eigs(const RunConfig& cfg, const DistributionSpec& spec, std::ostream& out) {
    const int n = cfg.truncation >= 0 ? cfg.truncation : 16;
    const double tol = std::isnan(cfg.tolerance) ? 1e-9 : cfg.tolerance;
    const auto eigs = diagonal_spectrum(spec, n);
    ReportWriter w(out, cfg.format);
    w.heading("diagonal spectrum");
    w.kv("truncation", n);
    w.list("eigenvalues", eigs);
    int first_negative = -1;
    for (std::size_t k = 0; k < eigs.size(); ++k)
        if (eigs[k] < -tol) {
            first_negative = static_cast<int>(k);
            break;
        }
    w.kv("first_negative_index", first_negative);
    return first_negative >= 0 ? kExitCertified : kExitLegit;
}

inline int run_klm(const RunConfig& cfg, const DistributionSpec& spec, std::ostream& out) {
    if (cfg.klm_n < 2) throw usage_error("klm: --n must be at least 2");
    const CharacteristicFunction cf = characteristic(spec);
    const KlmSearchResult res = klm_search(cf, cfg.klm_n, cfg.strategy, cfg.budget, cfg.seed);
    write_klm_result(out, res, cfg.format);
    if (cfg.dump_table && !res.points.empty()) {
        const KlmMatrix m = klm_matrix(cf, res.points);
        out << "# klm matrix n " << res.n << '\n';
        for (int i = 0; i < m.mat.rows(); ++i)
            for (int j = 0; j < m.mat.cols(); ++j)
                out << i << ' ' << j << ' ' << fmt_num(m.mat(i, j).real()) << ' ' << fmt_num(m.mat(i, j).imag())
                    << '\n';
    }
    const double tol = std::isnan(cfg.tolerance) ? 1e-9 : cfg.tolerance;
    return res.min_eigenvalue < -tol ? kExitCertified : kExitLegit;
}

inline int run_entangle(const RunConfig& cfg, const DistributionSpec& spec, std::ostream& out) {
    const int n = cfg.truncation >= 0 ? cfg.truncation : 4;
    const EntanglementReport rep = pt_test(spec, n, cfg.tolerance);
    write_report(out, rep, cfg.format);
    if (cfg.dump_table) {
        const PtBlock block = pt_block_determinant(spec, std::min(n, 4));
        out << "# pt block determinant " << fmt_num(block.determinant) << '\n';
        for (int i = 0; i < block.block.rows(); ++i)
            for (int j = 0; j < block.block.cols(); ++j)
                out << i << ' ' << j << ' ' << fmt_num(block.block(i, j).real()) << ' '
                    << fmt_num(block.block(i, j).imag()) << '\n';
    }
    return rep.verdict == EntangleVerdict::entangled_certified ? kExitCertified : kExitLegit;
}

inline int run_coeffs(const RunConfig& cfg, const DistributionSpec& spec, std::ostream& out) {
    const int cutoff = cfg.truncation >= 0 ? cfg.truncation : (spec.modes == 1 ? 20 : 10);
    CoefficientTable table;
    if (cfg.route == MatrixRoute::alpha_integral)
        table = coefficients_alpha_route(spec, cutoff);
    else
        table = coefficients_lambda_route(characteristic(spec), cutoff);
    write_table_dump(out, table);
    return kExitLegit;
}

inline int run_convert(const RunConfig& cfg, const DistributionSpec& spec, std::ostream& out) {
    const CharacteristicFunction cf = characteristic(spec);
    ReportWriter w(out, cfg.format);
    w.heading("s-conversion");
    w.kv("origin_s", cf.origin_s);
    const cx at_zero = spec.modes == 1 ? evaluate_charfn(cf, cx(0)) : evaluate_charfn(cf, cx(0), cx(0));
    w.kv("normalization", at_zero.real());
    write_charfn_dump(out, cf);
    return kExitLegit;
}

} // namespace detail

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const DistributionSpec spec = resolve_spec(cfg.input);
        switch (cfg.command) {
            case Command::check: return detail::run_check(cfg, spec, out);
            case Command::eigs: return detail::run_eigs(cfg, spec, out);
            case Command::klm: return detail::run_klm(cfg, spec, out);
            case Command::entangle: return detail::run_entangle(cfg, spec, out);
            case Command::coeffs: return detail::run_coeffs(cfg, spec, out);
            case Command::convert: return detail::run_convert(cfg, spec, out);
        }
        return kExitUsage;
    } catch (const usage_error& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const format_error& e) {
        err << "input error: " << e.what() << '\n';
        return kExitFormat;
    } catch (const conversion_error& e) {
        err << "input error: " << e.what() << '\n';
        return kExitFormat;
    } catch (const std::domain_error& e) {
        err << "domain error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInconclusive;
    }
}

} // namespace wigcheck
