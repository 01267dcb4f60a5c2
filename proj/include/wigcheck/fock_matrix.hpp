#pragma once

// Fock-basis quasi-density matrix and the positivity verdict. The matrix
// element alpha_kk' = <k| rho_q |k'> is assembled from the normally-ordered
// coefficients,
//   alpha_kk' = (1/pi) sum_{m=M}^{k} sqrt(k! k'!)/(k-m)! C_{m, k'-k+m},
// (M = max(0, k-k'); 1/pi^2 and collective indices for two modes), or
// directly from the characteristic function through displacement-operator
// matrix elements (associated Laguerre polynomials), which serves as an
// independent cross-check route.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "wigcheck/coefficients.hpp"

namespace wigcheck {

enum class SourceRoute { coefficients_lambda, coefficients_alpha, laguerre_direct };

inline std::vector<std::pair<int, int>> collective_basis(int total_excitation) {
    // ordered by increasing k1+k2; within a fixed sum, {0,k},{1,k-1},...,{k,0}
    std::vector<std::pair<int, int>> idx;
    for (int k = 0; k <= total_excitation; ++k)
        for (int k1 = 0; k1 <= k; ++k1) idx.emplace_back(k1, k - k1);
    return idx;
}

struct QuasiDensityMatrix {
    int modes = 1;
    int truncation = 0;
    Eigen::MatrixXcd mat;
    std::vector<std::pair<int, int>> basis; // two-mode collective indices
    SourceRoute source_route = SourceRoute::coefficients_lambda;
    double quad_error = 0.0;
    // Largest absolute-value sum over any entry's assembly: the summands of
    // the coefficient sum grow binomially before cancelling, so relative
    // coefficient error times this scale bounds the roundoff in the entries.
    double assembly_scale = 0.0;
    bool truncation_flag = false;

    double hermiticity_residual() const {
        return (mat - mat.adjoint()).cwiseAbs().maxCoeff();
    }
};

enum class Verdict { legitimate_up_to_N, illegitimate_certified, inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::legitimate_up_to_N: return "legitimate-up-to-N";
        case Verdict::illegitimate_certified: return "illegitimate-certified";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct LegitimacyReport {
    Verdict verdict = Verdict::inconclusive;
    double min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    std::vector<cx> certificate;          // present when illegitimate
    std::vector<int> violated_minor;      // index set of a negative principal minor
    std::vector<double> leading_minors;   // determinants of leading principal blocks
    int truncation = 0;
    double tolerance = 0.0;
    double route_agreement = std::numeric_limits<double>::quiet_NaN();
    double normalization = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<int, double>> trajectory; // (N, min eigenvalue)
    bool quad_warning = false;
    bool truncation_flag = false;
    bool cutoff_exhausted = false;
};

// ---------------------------------------------------------------------------

inline QuasiDensityMatrix build_matrix(const CoefficientTable& table, int truncation) {
    if (truncation < 0) throw usage_error("build_matrix: truncation must be nonnegative");
    if (truncation > table.cutoff)
        throw usage_error("build_matrix: table cutoff " + std::to_string(table.cutoff) +
                          " cannot supply C_{m,n} up to index " + std::to_string(truncation) +
                          "; rebuild the table with cutoff >= truncation");
    QuasiDensityMatrix out;
    out.modes = table.modes;
    out.truncation = truncation;
    out.source_route =
        table.route == Route::lambda_integral ? SourceRoute::coefficients_lambda : SourceRoute::coefficients_alpha;
    out.quad_error = table.quad_error;
    out.truncation_flag = table.truncation_flag;

    if (table.modes == 1) {
        const int d = truncation + 1;
        out.mat.resize(d, d);
        for (int k = 0; k < d; ++k)
            for (int kp = 0; kp < d; ++kp) {
                const int M = std::max(0, k - kp);
                cx acc(0);
                double mag = 0.0;
                const double root = std::sqrt(factorial(k) * factorial(kp));
                for (int m = M; m <= k; ++m) {
                    const cx term = root / factorial(k - m) * table.at(m, kp - k + m);
                    acc += term;
                    mag += std::abs(term);
                }
                out.mat(k, kp) = acc / std::numbers::pi;
                out.assembly_scale = std::max(out.assembly_scale, mag / std::numbers::pi);
            }
        return out;
    }

    out.basis = collective_basis(truncation);
    const int d = static_cast<int>(out.basis.size());
    out.mat.resize(d, d);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    for (int I = 0; I < d; ++I)
        for (int J = 0; J < d; ++J) {
            const auto [k1, k2] = out.basis[I];
            const auto [kp1, kp2] = out.basis[J];
            const double root = std::sqrt(factorial(k1) * factorial(kp1) * factorial(k2) * factorial(kp2));
            cx acc(0);
            double mag = 0.0;
            for (int m1 = std::max(0, k1 - kp1); m1 <= k1; ++m1)
                for (int m2 = std::max(0, k2 - kp2); m2 <= k2; ++m2) {
                    const cx term = root / (factorial(k1 - m1) * factorial(k2 - m2)) *
                                    table.at(m1, kp1 - k1 + m1, m2, kp2 - k2 + m2);
                    acc += term;
                    mag += std::abs(term);
                }
            out.mat(I, J) = acc / pi2;
            out.assembly_scale = std::max(out.assembly_scale, mag / pi2);
        }
    return out;
}

// Direct route: alpha_kk' from the characteristic function,
//   alpha_kk' = ((-1)^{k-k'}/pi) sqrt(k'!/k!)
//               Int d^2xi xi^{k-k'} e^{-|xi|^2/2} C(xi) L_{k'}^{(k-k')}(|xi|^2)
// for k >= k', Hermitian completion below the diagonal.
inline QuasiDensityMatrix build_matrix_laguerre(const CharacteristicFunction& cf, int truncation) {
    if (cf.modes != 1)
        throw usage_error("build_matrix_laguerre: single-mode route only; use the coefficient route for two modes");
    if (truncation < 0) throw usage_error("build_matrix_laguerre: truncation must be nonnegative");
    const int N = truncation;
    const int d = N + 1;

    QuadAxis q;
    if (cf.closed_form()) {
        const double radius = integration_radius(0.5 + cf.decay_min(), 2 * N + cf.extra_power_max());
        q = trapezoid_axis(radius, detail::lambda_step(0.5 + cf.decay_max()));
    }

    QuasiDensityMatrix out;
    out.modes = 1;
    out.truncation = N;
    out.source_route = SourceRoute::laguerre_direct;
    out.mat = Eigen::MatrixXcd::Zero(d, d);

    const auto accumulate = [&](const QuadAxis& qx, const QuadAxis& qy, auto&& val) {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
        std::vector<double> lag;
        std::vector<cx> pw(d);
        for (std::size_t i = 0; i < qx.node.size(); ++i)
            for (std::size_t j = 0; j < qy.node.size(); ++j) {
                const cx xi(qx.node[i], qy.node[j]);
                const cx base = qx.weight[i] * qy.weight[j] * std::exp(-0.5 * std::norm(xi)) * val(i, j, xi);
                if (base == cx(0)) continue;
                const double x = std::norm(xi);
                detail::laguerre_table(N, x, lag);
                pw[0] = cx(1);
                for (int p = 1; p <= N; ++p) pw[p] = pw[p - 1] * xi;
                for (int k = 0; k <= N; ++k)
                    for (int kp = 0; kp <= k; ++kp)
                        acc(k, kp) += base * pw[k - kp] * lag[static_cast<std::size_t>(kp) * (N + 1) + (k - kp)];
            }
        return acc;
    };

    Eigen::MatrixXcd raw;
    if (cf.closed_form()) {
        raw = accumulate(q, q, [&](std::size_t, std::size_t, cx xi) { return evaluate_charfn(cf, xi); });
    } else {
        const auto& g = *cf.grid1;
        const QuadAxis qx = quad_from_axis(g.xaxis()), qy = quad_from_axis(g.yaxis());
        raw = accumulate(qx, qy, [&](std::size_t i, std::size_t j, cx) { return g.at(i, j); });
        const double needed = integration_radius(0.5 + cf.decay_min(), 2 * N, 4.0);
        if (needed > 1.02 * cf.lambda_extent) out.truncation_flag = true;
    }

    for (int k = 0; k <= N; ++k)
        for (int kp = 0; kp <= k; ++kp) {
            const double sign = ((k - kp) % 2 == 0) ? 1.0 : -1.0;
            const cx v = sign / std::numbers::pi * std::sqrt(factorial(kp) / factorial(k)) * raw(k, kp);
            out.mat(k, kp) = v;
            out.mat(kp, k) = std::conj(v);
        }
    return out;
}

// ---------------------------------------------------------------------------

inline double default_psd_tolerance(const QuasiDensityMatrix& m) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double scale = m.mat.size() ? m.mat.cwiseAbs().maxCoeff() : 1.0;
    // Coefficient errors (representation plus quadrature, relative ~1e-14)
    // enter the entries multiplied by the cancellation scale of the
    // assembly sum.
    const double assembly_noise = 100.0 * eps * m.assembly_scale;
    return std::max(1e-9, 1e3 * eps * scale + assembly_noise) + m.quad_error;
}

namespace detail {

inline std::vector<double> leading_principal_minors(const Eigen::MatrixXcd& A) {
    std::vector<double> minors(A.rows());
    for (int k = 1; k <= A.rows(); ++k)
        minors[k - 1] = A.topLeftCorner(k, k).determinant().real();
    return minors;
}

} // namespace detail

// Positivity verdict by full Hermitian eigendecomposition. A negative
// eigenvalue with its eigenvector is a certificate valid at any truncation
// (it exhibits a state with negative fidelity); positivity at finite N is
// necessary evidence only and never claims full legitimacy.
inline LegitimacyReport psd_verdict(const QuasiDensityMatrix& matrix, double tolerance) {
    const double scale = std::max(1.0, matrix.mat.size() ? matrix.mat.cwiseAbs().maxCoeff() : 0.0);
    if (matrix.hermiticity_residual() > 1e-8 * scale)
        throw internal_error("psd_verdict: matrix violates Hermitian symmetry beyond 1e-8");

    LegitimacyReport rep;
    rep.truncation = matrix.truncation;
    rep.tolerance = tolerance;
    rep.quad_warning = matrix.quad_error > 1e-6;
    rep.truncation_flag = matrix.truncation_flag;

    const Eigen::MatrixXcd H = 0.5 * (matrix.mat + matrix.mat.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H);
    if (solver.info() != Eigen::Success) throw internal_error("psd_verdict: eigendecomposition failed");
    rep.min_eigenvalue = solver.eigenvalues()(0);
    rep.leading_minors = detail::leading_principal_minors(H);

    if (rep.min_eigenvalue < -tolerance) {
        rep.verdict = Verdict::illegitimate_certified;
        const Eigen::VectorXcd v = solver.eigenvectors().col(0);
        rep.certificate.assign(v.data(), v.data() + v.size());
        const double recomputed = (v.adjoint() * H * v)(0, 0).real();
        if (std::abs(recomputed - rep.min_eigenvalue) > std::max(tolerance, 1e-10 * scale) * 10)
            throw internal_error("psd_verdict: certificate does not reproduce the minimal eigenvalue");

        // A violated principal minor: first negative leading minor if any,
        // else nested prefixes of indices ordered by certificate weight.
        for (std::size_t k = 0; k < rep.leading_minors.size(); ++k)
            if (rep.leading_minors[k] < -tolerance) {
                for (std::size_t i = 0; i <= k; ++i) rep.violated_minor.push_back(static_cast<int>(i));
                break;
            }
        if (rep.violated_minor.empty()) {
            std::vector<int> order(H.rows());
            for (int i = 0; i < H.rows(); ++i) order[i] = i;
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return std::norm(rep.certificate[a]) > std::norm(rep.certificate[b]); });
            for (int k = 1; k <= H.rows(); ++k) {
                Eigen::MatrixXcd sub(k, k);
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j) sub(i, j) = H(order[i], order[j]);
                if (sub.determinant().real() < -tolerance) {
                    rep.violated_minor.assign(order.begin(), order.begin() + k);
                    std::sort(rep.violated_minor.begin(), rep.violated_minor.end());
                    break;
                }
            }
        }
    } else {
        rep.verdict = Verdict::legitimate_up_to_N;
    }
    return rep;
}

inline LegitimacyReport psd_verdict(const QuasiDensityMatrix& matrix) {
    return psd_verdict(matrix, default_psd_tolerance(matrix));
}

// ---------------------------------------------------------------------------
// Truncation escalation: verdicts at N_start, N_start+4, ... until a
// certificate appears or N_max is reached.

inline std::vector<int> escalation_steps(int n_start, int n_max) {
    if (n_start > n_max) throw usage_error("escalate: N_start must not exceed N_max");
    std::vector<int> steps;
    for (int n = n_start; n < n_max; n += 4) steps.push_back(n);
    steps.push_back(n_max);
    return steps;
}

inline LegitimacyReport escalate(const CoefficientTable& table, int n_start, int n_max,
                                 double tolerance = std::numeric_limits<double>::quiet_NaN()) {
    LegitimacyReport last;
    bool exhausted = false;
    for (int n : escalation_steps(n_start, n_max)) {
        if (n > table.cutoff) {
            exhausted = true;
            break;
        }
        const QuasiDensityMatrix m = build_matrix(table, n);
        const double tol = std::isnan(tolerance) ? default_psd_tolerance(m) : tolerance;
        LegitimacyReport rep = psd_verdict(m, tol);
        rep.trajectory = std::move(last.trajectory);
        rep.trajectory.emplace_back(n, rep.min_eigenvalue);
        last = std::move(rep);
        if (last.verdict == Verdict::illegitimate_certified) return last;
    }
    if (exhausted && last.verdict != Verdict::illegitimate_certified) {
        last.verdict = Verdict::inconclusive;
        last.cutoff_exhausted = true;
    }
    return last;
}

inline LegitimacyReport escalate(const DistributionSpec& spec, int n_start, int n_max,
                                 double tolerance = std::numeric_limits<double>::quiet_NaN(),
                                 Route route = Route::lambda_integral) {
    const CharacteristicFunction cf = characteristic(spec);
    const CoefficientTable table = route == Route::lambda_integral ? coefficients_lambda_route(cf, n_max)
                                                                   : coefficients_alpha_route(spec, n_max);
    LegitimacyReport rep = escalate(table, n_start, n_max, tolerance);
    rep.normalization = check_normalization(spec).value;

    // Cross-route agreement, reported as the max entry discrepancy between
    // the coefficient-route matrix and the direct Laguerre route.
    if (spec.modes == 1) {
        const int n_check = std::min(rep.truncation, 10);
        const QuasiDensityMatrix a = build_matrix(table, n_check);
        const QuasiDensityMatrix b = build_matrix_laguerre(cf, n_check);
        rep.route_agreement = (a.mat - b.mat).cwiseAbs().maxCoeff();
    } else if (spec.s_parameter == 0.0) {
        const int n_check = std::min({rep.truncation, table.cutoff, 3});
        const CoefficientTable other = route == Route::lambda_integral ? coefficients_alpha_route(spec, n_check)
                                                                       : coefficients_lambda_route(cf, n_check);
        const QuasiDensityMatrix a = build_matrix(table, n_check);
        const QuasiDensityMatrix b = build_matrix(other, n_check);
        rep.route_agreement = (a.mat - b.mat).cwiseAbs().maxCoeff();
    }
    return rep;
}

} // namespace wigcheck
