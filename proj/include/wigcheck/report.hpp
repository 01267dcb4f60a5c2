#pragma once

// Report rendering. Structured output is a flat key-value document, one
// `key value` pair per line; text output is the readable form. Both print
// every numeric field through the same 12-significant-digit formatter, so
// the two formats agree to printed precision, and identical runs produce
// byte-identical documents.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "wigcheck/entangle.hpp"
#include "wigcheck/fock_matrix.hpp"
#include "wigcheck/klm.hpp"

namespace wigcheck {

inline std::string fmt_num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string fmt_cx(cx v) {
    return fmt_num(v.real()) + "," + fmt_num(v.imag());
}

enum class OutputFormat { text, structured };

class ReportWriter {
public:
    ReportWriter(std::ostream& os, OutputFormat fmt) : os_(os), fmt_(fmt) {}

    void kv(const std::string& key, const std::string& value) {
        if (fmt_ == OutputFormat::structured)
            os_ << key << ' ' << value << '\n';
        else
            os_ << "  " << key << ": " << value << '\n';
    }
    void kv(const std::string& key, double value) { kv(key, fmt_num(value)); }
    void kv(const std::string& key, int value) { kv(key, std::to_string(value)); }
    void kv(const std::string& key, long value) { kv(key, std::to_string(value)); }

    void list(const std::string& key, const std::vector<double>& xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + fmt_num(xs[i]);
        kv(key, s);
    }
    void list(const std::string& key, const std::vector<int>& xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + std::to_string(xs[i]);
        kv(key, s);
    }
    void list(const std::string& key, const std::vector<cx>& xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + fmt_cx(xs[i]);
        kv(key, s);
    }

    void heading(const std::string& text) {
        if (fmt_ == OutputFormat::text) os_ << text << '\n';
    }

private:
    std::ostream& os_;
    OutputFormat fmt_;
};

inline void write_report(std::ostream& os, const LegitimacyReport& rep, OutputFormat fmt) {
    ReportWriter w(os, fmt);
    w.heading("legitimacy report");
    w.kv("verdict", verdict_name(rep.verdict));
    w.kv("min_eigenvalue", rep.min_eigenvalue);
    w.kv("truncation", rep.truncation);
    w.kv("tolerance", rep.tolerance);
    if (!std::isnan(rep.route_agreement)) w.kv("route_agreement", rep.route_agreement);
    if (!std::isnan(rep.normalization)) w.kv("normalization", rep.normalization);
    if (!rep.certificate.empty()) w.list("certificate", rep.certificate);
    if (!rep.violated_minor.empty()) w.list("minor", rep.violated_minor);
    if (!rep.trajectory.empty()) {
        std::string s;
        for (std::size_t i = 0; i < rep.trajectory.size(); ++i)
            s += (i ? " " : "") + std::to_string(rep.trajectory[i].first) + ":" + fmt_num(rep.trajectory[i].second);
        w.kv("trajectory", s);
    }
    if (rep.quad_warning) w.kv("quadrature_warning", "1");
    if (rep.truncation_flag) w.kv("lambda_truncation", "1");
    if (rep.cutoff_exhausted) w.kv("cutoff_exhausted", "1");
}

inline void write_report(std::ostream& os, const EntanglementReport& rep, OutputFormat fmt) {
    ReportWriter w(os, fmt);
    w.heading("entanglement report");
    w.kv("verdict", verdict_name(rep.verdict));
    w.kv("pt_min_eigenvalue", rep.pt_min_eigenvalue);
    w.kv("truncation", rep.truncation);
    w.kv("tolerance", rep.tolerance);
    if (!std::isnan(rep.normalization)) w.kv("normalization", rep.normalization);
    if (!rep.witness.empty()) w.list("witness", rep.witness);
    w.list("determinant_trace", rep.determinant_trace);
    if (rep.quad_warning) w.kv("quadrature_warning", "1");
    if (rep.truncation_flag) w.kv("lambda_truncation", "1");
}

inline void write_klm_result(std::ostream& os, const KlmSearchResult& res, OutputFormat fmt) {
    ReportWriter w(os, fmt);
    w.heading("klm search result");
    w.kv("n", res.n);
    w.kv("min_eigenvalue", res.min_eigenvalue);
    w.list("points", res.points);
    w.kv("evaluations", res.evaluations);
    w.kv("seed", static_cast<long>(res.seed));
}

inline void write_table_dump(std::ostream& os, const CoefficientTable& table) {
    os << "# coefficient table: modes " << table.modes << " cutoff " << table.cutoff << " route "
       << (table.route == Route::lambda_integral ? "lambda" : "alpha") << " quad_error " << fmt_num(table.quad_error)
       << (table.quad_warning ? " quadrature_warning" : "") << '\n';
    if (table.modes == 1) {
        for (int m = 0; m <= table.cutoff; ++m)
            for (int n = 0; n <= table.cutoff; ++n)
                os << m << ' ' << n << ' ' << fmt_num(table.at(m, n).real()) << ' ' << fmt_num(table.at(m, n).imag())
                   << '\n';
        return;
    }
    for (int m1 = 0; m1 <= table.cutoff; ++m1)
        for (int n1 = 0; n1 <= table.cutoff; ++n1)
            for (int m2 = 0; m2 <= table.cutoff; ++m2)
                for (int n2 = 0; n2 <= table.cutoff; ++n2)
                    os << m1 << ' ' << n1 << ' ' << m2 << ' ' << n2 << ' '
                       << fmt_num(table.at(m1, n1, m2, n2).real()) << ' '
                       << fmt_num(table.at(m1, n1, m2, n2).imag()) << '\n';
}

inline void write_charfn_dump(std::ostream& os, const CharacteristicFunction& cf, double extent = 8.0,
                              double step = 0.25) {
    os << "# characteristic function: modes " << cf.modes << " origin_s " << fmt_num(cf.origin_s) << '\n';
    if (cf.modes != 1) {
        os << "# two-mode dump restricted to the xi2 = 0 slice\n";
    }
    const int half = static_cast<int>(extent / step);
    for (int i = -half; i <= half; ++i)
        for (int j = -half; j <= half; ++j) {
            const cx xi(i * step, j * step);
            const cx v = cf.modes == 1 ? evaluate_charfn(cf, xi) : evaluate_charfn(cf, xi, cx(0));
            os << fmt_num(xi.real()) << ' ' << fmt_num(xi.imag()) << ' ' << fmt_num(v.real()) << ' '
               << fmt_num(v.imag()) << '\n';
        }
}

} // namespace wigcheck
