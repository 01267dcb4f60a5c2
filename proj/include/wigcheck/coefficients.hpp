#pragma once

// Normally-ordered expansion coefficients of the quasi-density operator,
//   rho_q = (1/pi) sum_{mn} C_mn a†^m a^n          (one mode)
// and the two-mode analogue with prefactor 1/pi^2. Two independent routes
// compute the same table: an integral against the characteristic function,
//   C_mn = ((-1)^m / m! n!) Int d^2xi xi^m xi*^n e^{-|xi|^2/2} C_t(xi),
// and an integral against the phase-space function itself,
//   C_mn = (2 pi 2^m (-1)^n / m! n!) Int d^2a a^{m-n} S(m, m-n, 2|a|^2) W_t(a).
// Their entrywise agreement pins the overall sign/normalization conventions.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "wigcheck/charfn.hpp"
#include "wigcheck/phase_space.hpp"
#include "wigcheck/quadrature.hpp"
#include "wigcheck/special_functions.hpp"

namespace wigcheck {

enum class Route { lambda_integral, alpha_integral };

class CoefficientTable {
public:
    int modes = 1;
    int cutoff = 0;
    Route route = Route::lambda_integral;
    std::vector<cx> data;

    // Discretization estimate: max entry change when the quadrature
    // resolution is halved.
    double quad_error = 0.0;
    bool quad_warning = false;
    bool truncation_flag = false;

    cx at(int m, int n) const { return data[static_cast<std::size_t>(m) * (cutoff + 1) + n]; }
    cx& at(int m, int n) { return data[static_cast<std::size_t>(m) * (cutoff + 1) + n]; }

    std::size_t index4(int m1, int n1, int m2, int n2) const {
        const std::size_t c = cutoff + 1;
        return ((static_cast<std::size_t>(m1) * c + n1) * c + m2) * c + n2;
    }
    cx at(int m1, int n1, int m2, int n2) const { return data[index4(m1, n1, m2, n2)]; }
    cx& at(int m1, int n1, int m2, int n2) { return data[index4(m1, n1, m2, n2)]; }

    double hermiticity_residual() const {
        double r = 0.0;
        if (modes == 1) {
            for (int m = 0; m <= cutoff; ++m)
                for (int n = 0; n <= cutoff; ++n) r = std::max(r, std::abs(at(n, m) - std::conj(at(m, n))));
            return r;
        }
        for (int m1 = 0; m1 <= cutoff; ++m1)
            for (int n1 = 0; n1 <= cutoff; ++n1)
                for (int m2 = 0; m2 <= cutoff; ++m2)
                    for (int n2 = 0; n2 <= cutoff; ++n2)
                        r = std::max(r, std::abs(at(n1, m1, n2, m2) - std::conj(at(m1, n1, m2, n2))));
        return r;
    }
};

namespace detail {

struct MomentMatrix {
    int cutoff = 0;
    std::vector<cx> v;
    explicit MomentMatrix(int c = 0) : cutoff(c), v(static_cast<std::size_t>(c + 1) * (c + 1)) {}
    cx& at(int m, int n) { return v[static_cast<std::size_t>(m) * (cutoff + 1) + n]; }
    cx at(int m, int n) const { return v[static_cast<std::size_t>(m) * (cutoff + 1) + n]; }
};

inline QuadAxis strided_quad(const QuadAxis& q, int stride) {
    if (stride <= 1) return q;
    QuadAxis out;
    for (std::size_t i = 0; i < q.node.size(); i += stride) out.node.push_back(q.node[i]);
    const double h = out.node.size() > 1 ? out.node[1] - out.node[0] : 1.0;
    out.weight.assign(out.node.size(), h);
    out.weight.front() = out.weight.back() = h / 2;
    return out;
}

// I(m,n) = sum_nodes w xi^m xi*^n e^{-|xi|^2/2} val(xi)
template <typename ValueFn>
MomentMatrix lambda_moments(const QuadAxis& qx, const QuadAxis& qy, int cutoff, ValueFn&& val) {
    MomentMatrix M(cutoff);
    std::vector<cx> pm(cutoff + 1), pn(cutoff + 1);
    for (std::size_t i = 0; i < qx.node.size(); ++i)
        for (std::size_t j = 0; j < qy.node.size(); ++j) {
            const cx xi(qx.node[i], qy.node[j]);
            const cx base = qx.weight[i] * qy.weight[j] * std::exp(-0.5 * std::norm(xi)) * val(i, j, xi);
            if (base == cx(0)) continue;
            pm[0] = pn[0] = cx(1);
            for (int k = 1; k <= cutoff; ++k) {
                pm[k] = pm[k - 1] * xi;
                pn[k] = pn[k - 1] * std::conj(xi);
            }
            for (int m = 0; m <= cutoff; ++m) {
                const cx bm = pm[m] * base;
                for (int n = 0; n <= cutoff; ++n) M.at(m, n) += bm * pn[n];
            }
        }
    return M;
}

// Laguerre table L_d^{(al)}(x) for d + al <= cutoff, by forward recurrence
// per upper index.
inline void laguerre_table(int cutoff, double x, std::vector<double>& lag) {
    const int c1 = cutoff + 1;
    lag.assign(static_cast<std::size_t>(c1) * c1, 0.0);
    for (int al = 0; al <= cutoff; ++al) {
        lag[static_cast<std::size_t>(0) * c1 + al] = 1.0;
        if (al == cutoff) continue;
        double lm1 = 1.0, l = 1.0 + al - x;
        lag[static_cast<std::size_t>(1) * c1 + al] = l;
        for (int d = 1; d + al < cutoff; ++d) {
            const double lp1 = ((2 * d + 1 + al - x) * l - (d + al) * lm1) / (d + 1);
            lm1 = l;
            l = lp1;
            lag[static_cast<std::size_t>(d + 1) * c1 + al] = l;
        }
    }
}

// J(m,n) = sum_nodes w T(m,n,a) val(a) with the kernel
//   T(m,n,a) = a^{m-n} S(m, m-n, 2|a|^2)                     for m >= n,
//   T(m,n,a) = (-2)^{n-m} a*^{n-m} S(n, n-m, 2|a|^2)         for m <  n
// (the two lines agree through the index shift of the S series; the second
// avoids negative powers of a).
template <typename ValueFn>
MomentMatrix alpha_moments(const QuadAxis& qx, const QuadAxis& qy, int cutoff, ValueFn&& val) {
    MomentMatrix M(cutoff);
    const int c1 = cutoff + 1;
    std::vector<double> lag, fact(c1), pw2(c1);
    std::vector<cx> pa(c1), pc(c1);
    for (int k = 0; k <= cutoff; ++k) {
        fact[k] = factorial(k);
        pw2[k] = std::pow(-2.0, k);
    }
    for (std::size_t i = 0; i < qx.node.size(); ++i)
        for (std::size_t j = 0; j < qy.node.size(); ++j) {
            const cx a(qx.node[i], qy.node[j]);
            const cx fv = qx.weight[i] * qy.weight[j] * val(i, j, a);
            if (fv == cx(0)) continue;
            const double x = 2.0 * std::norm(a);
            const double damp = std::exp(-x);
            laguerre_table(cutoff, x, lag);
            pa[0] = pc[0] = cx(1);
            for (int k = 1; k <= cutoff; ++k) {
                pa[k] = pa[k - 1] * a;
                pc[k] = pc[k - 1] * std::conj(a);
            }
            for (int m = 0; m <= cutoff; ++m)
                for (int n = 0; n <= cutoff; ++n) {
                    cx t;
                    if (m >= n)
                        t = pa[m - n] * (fact[n] * damp * lag[static_cast<std::size_t>(n) * c1 + (m - n)]);
                    else
                        t = pc[n - m] * (pw2[n - m] * fact[m] * damp * lag[static_cast<std::size_t>(m) * c1 + (n - m)]);
                    M.at(m, n) += t * fv;
                }
        }
    return M;
}

// Per-node kernel table for two-mode contractions: K[node][(m,n)].
enum class KernelKind { lambda_moment, alpha_kernel };

inline std::vector<cx> kernel_table(const QuadAxis& qx, const QuadAxis& qy, int cutoff, KernelKind kind) {
    const int c1 = cutoff + 1;
    const std::size_t mn = static_cast<std::size_t>(c1) * c1;
    std::vector<cx> K(qx.node.size() * qy.node.size() * mn);
    std::vector<double> lag, fact(c1), pw2(c1);
    std::vector<cx> pa(c1), pc(c1);
    for (int k = 0; k <= cutoff; ++k) {
        fact[k] = factorial(k);
        pw2[k] = std::pow(-2.0, k);
    }
    std::size_t node = 0;
    for (std::size_t i = 0; i < qx.node.size(); ++i)
        for (std::size_t j = 0; j < qy.node.size(); ++j, ++node) {
            const cx a(qx.node[i], qy.node[j]);
            const double w = qx.weight[i] * qy.weight[j];
            cx* row = &K[node * mn];
            pa[0] = pc[0] = cx(1);
            for (int k = 1; k <= cutoff; ++k) {
                pa[k] = pa[k - 1] * a;
                pc[k] = pc[k - 1] * std::conj(a);
            }
            if (kind == KernelKind::lambda_moment) {
                const double damp = std::exp(-0.5 * std::norm(a));
                for (int m = 0; m <= cutoff; ++m)
                    for (int n = 0; n <= cutoff; ++n) row[static_cast<std::size_t>(m) * c1 + n] = w * damp * pa[m] * pc[n];
            } else {
                const double x = 2.0 * std::norm(a);
                const double damp = std::exp(-x);
                laguerre_table(cutoff, x, lag);
                for (int m = 0; m <= cutoff; ++m)
                    for (int n = 0; n <= cutoff; ++n) {
                        cx t;
                        if (m >= n)
                            t = pa[m - n] * (fact[n] * damp * lag[static_cast<std::size_t>(n) * c1 + (m - n)]);
                        else
                            t = pc[n - m] *
                                (pw2[n - m] * fact[m] * damp * lag[static_cast<std::size_t>(m) * c1 + (n - m)]);
                        row[static_cast<std::size_t>(m) * c1 + n] = w * t;
                    }
            }
        }
    return K;
}

// Raw two-mode integrals I(m1,n1,m2,n2) = sum K1[node1] K2[node2] val, via a
// two-stage contraction (mode 2 first).
template <typename ValueFn>
std::vector<cx> contract_two_mode(const QuadAxis& q1x, const QuadAxis& q1y, const QuadAxis& q2x,
                                  const QuadAxis& q2y, int cutoff, KernelKind kind, ValueFn&& val) {
    const int c1 = cutoff + 1;
    const std::size_t mn = static_cast<std::size_t>(c1) * c1;
    const std::size_t n1 = q1x.node.size() * q1y.node.size();
    const std::size_t n2 = q2x.node.size() * q2y.node.size();
    const auto K1 = kernel_table(q1x, q1y, cutoff, kind);
    const auto K2 = kernel_table(q2x, q2y, cutoff, kind);

    std::vector<cx> stage1(n1 * mn, cx(0));
    std::vector<cx> row(n2);
    std::size_t node1 = 0;
    for (std::size_t i = 0; i < q1x.node.size(); ++i)
        for (std::size_t j = 0; j < q1y.node.size(); ++j, ++node1) {
            std::size_t node2 = 0;
            for (std::size_t k = 0; k < q2x.node.size(); ++k)
                for (std::size_t l = 0; l < q2y.node.size(); ++l, ++node2) row[node2] = val(i, j, k, l);
            cx* out = &stage1[node1 * mn];
            for (std::size_t node = 0; node < n2; ++node) {
                const cx v = row[node];
                if (v == cx(0)) continue;
                const cx* kr = &K2[node * mn];
                for (std::size_t t = 0; t < mn; ++t) out[t] += kr[t] * v;
            }
        }

    std::vector<cx> I(mn * mn, cx(0));
    for (std::size_t node = 0; node < n1; ++node) {
        const cx* kr = &K1[node * mn];
        const cx* s = &stage1[node * mn];
        for (std::size_t u = 0; u < mn; ++u) {
            const cx ku = kr[u];
            if (ku == cx(0)) continue;
            cx* out = &I[u * mn];
            for (std::size_t t = 0; t < mn; ++t) out[t] += ku * s[t];
        }
    }
    return I; // indexed [(m1,n1)][(m2,n2)]
}

inline double lambda_step(double decay_max) {
    return std::min(0.125, std::numbers::pi / std::sqrt(150.0 * std::max(decay_max, 0.5)));
}

} // namespace detail

// ---------------------------------------------------------------------------
// lambda route (Eq. route via the characteristic function)

inline CoefficientTable coefficients_lambda_route(const CharacteristicFunction& cf, int cutoff) {
    if (cutoff < 0) throw usage_error("coefficients: cutoff must be nonnegative");
    CoefficientTable table;
    table.modes = cf.modes;
    table.cutoff = cutoff;
    table.route = Route::lambda_integral;
    const int c1 = cutoff + 1;

    const auto entry_prefactor = [&](int m, int n) {
        return ((m % 2 == 0) ? 1.0 : -1.0) / (factorial(m) * factorial(n));
    };

    if (cf.modes == 1) {
        table.data.assign(static_cast<std::size_t>(c1) * c1, cx(0));
        detail::MomentMatrix I(cutoff), Ih(cutoff);
        if (cf.closed_form()) {
            const double radius = integration_radius(0.5 + cf.decay_min(), 2 * cutoff + cf.extra_power_max());
            const QuadAxis q = trapezoid_axis(radius, detail::lambda_step(0.5 + cf.decay_max()));
            const QuadAxis qh = detail::strided_quad(q, 2);
            const auto val = [&](std::size_t, std::size_t, cx xi) { return evaluate_charfn(cf, xi); };
            I = detail::lambda_moments(q, q, cutoff, val);
            Ih = detail::lambda_moments(qh, qh, cutoff, val);
        } else {
            const auto& g = *cf.grid1;
            const double needed = integration_radius(0.5 + cf.decay_min(), 2 * cutoff, 4.0);
            if (needed > 1.02 * cf.lambda_extent) table.truncation_flag = true;
            const QuadAxis qx = quad_from_axis(g.xaxis()), qy = quad_from_axis(g.yaxis());
            I = detail::lambda_moments(qx, qy, cutoff,
                                       [&](std::size_t i, std::size_t j, cx) { return g.at(i, j); });
            Ih = detail::lambda_moments(detail::strided_quad(qx, 2), detail::strided_quad(qy, 2), cutoff,
                                        [&](std::size_t i, std::size_t j, cx) { return g.at(2 * i, 2 * j); });
        }
        for (int m = 0; m <= cutoff; ++m)
            for (int n = 0; n <= cutoff; ++n) {
                table.at(m, n) = entry_prefactor(m, n) * I.at(m, n);
                table.quad_error =
                    std::max(table.quad_error, std::abs(entry_prefactor(m, n) * (I.at(m, n) - Ih.at(m, n))));
            }
        table.quad_warning = table.quad_error > 1e-6;
        if (cf.truncated()) table.truncation_flag = true;
        return table;
    }

    // two modes
    table.data.assign(static_cast<std::size_t>(c1) * c1 * c1 * c1, cx(0));
    const std::size_t mn = static_cast<std::size_t>(c1) * c1;
    std::vector<cx> I(mn * mn, cx(0)), Ih(mn * mn, cx(0));

    if (cf.closed_form()) {
        for (const auto& term : cf.terms) {
            std::array<detail::MomentMatrix, 2> M{detail::MomentMatrix(cutoff), detail::MomentMatrix(cutoff)};
            std::array<detail::MomentMatrix, 2> Mh{detail::MomentMatrix(cutoff), detail::MomentMatrix(cutoff)};
            for (int mode = 0; mode < 2; ++mode) {
                const auto& f = term.mode[mode];
                const double radius = integration_radius(0.5 + f.decay, 2 * cutoff + f.extra_power);
                const QuadAxis q = trapezoid_axis(radius, detail::lambda_step(0.5 + f.decay));
                const auto val = [&](std::size_t, std::size_t, cx xi) { return f.f(xi); };
                M[mode] = detail::lambda_moments(q, q, cutoff, val);
                Mh[mode] = detail::lambda_moments(detail::strided_quad(q, 2), detail::strided_quad(q, 2), cutoff, val);
            }
            for (std::size_t u = 0; u < mn; ++u)
                for (std::size_t t = 0; t < mn; ++t) {
                    I[u * mn + t] += term.weight * M[0].v[u] * M[1].v[t];
                    Ih[u * mn + t] += term.weight * Mh[0].v[u] * Mh[1].v[t];
                }
        }
    } else {
        const auto& g = *cf.grid4;
        const QuadAxis q0 = quad_from_axis(g.axis(0)), q1 = quad_from_axis(g.axis(1));
        const QuadAxis q2 = quad_from_axis(g.axis(2)), q3 = quad_from_axis(g.axis(3));
        I = detail::contract_two_mode(q0, q1, q2, q3, cutoff, detail::KernelKind::lambda_moment,
                                      [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
                                          return g.at(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k),
                                                      static_cast<int>(l));
                                      });
        Ih = detail::contract_two_mode(detail::strided_quad(q0, 2), detail::strided_quad(q1, 2),
                                       detail::strided_quad(q2, 2), detail::strided_quad(q3, 2), cutoff,
                                       detail::KernelKind::lambda_moment,
                                       [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
                                           return g.at(static_cast<int>(2 * i), static_cast<int>(2 * j),
                                                       static_cast<int>(2 * k), static_cast<int>(2 * l));
                                       });
        const double needed = integration_radius(1.0, 2 * cutoff, 4.0);
        if (needed > 1.02 * cf.lambda_extent) table.truncation_flag = true;
    }

    for (int m1 = 0; m1 <= cutoff; ++m1)
        for (int n1 = 0; n1 <= cutoff; ++n1)
            for (int m2 = 0; m2 <= cutoff; ++m2)
                for (int n2 = 0; n2 <= cutoff; ++n2) {
                    const std::size_t u = static_cast<std::size_t>(m1) * c1 + n1;
                    const std::size_t t = static_cast<std::size_t>(m2) * c1 + n2;
                    const double pref = entry_prefactor(m1, n1) * entry_prefactor(m2, n2);
                    table.at(m1, n1, m2, n2) = pref * I[u * mn + t];
                    table.quad_error =
                        std::max(table.quad_error, std::abs(pref * (I[u * mn + t] - Ih[u * mn + t])));
                }
    table.quad_warning = table.quad_error > 1e-6;
    if (cf.truncated()) table.truncation_flag = true;
    return table;
}

// ---------------------------------------------------------------------------
// alpha route (kernel S against W_t; stated for Wigner inputs)

inline CoefficientTable coefficients_alpha_route(const DistributionSpec& spec, int cutoff) {
    if (cutoff < 0) throw usage_error("coefficients: cutoff must be nonnegative");
    if (spec.s_parameter != 0.0)
        throw usage_error("coefficients_alpha_route: input must be a Wigner (s = 0) spec; convert via the "
                          "characteristic function first");
    CoefficientTable table;
    table.modes = spec.modes;
    table.cutoff = cutoff;
    table.route = Route::alpha_integral;
    const int c1 = cutoff + 1;

    const auto entry_prefactor = [&](int m, int n) {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        return 2.0 * std::numbers::pi * std::pow(2.0, m) * sign / (factorial(m) * factorial(n));
    };

    if (spec.modes == 1) {
        table.data.assign(static_cast<std::size_t>(c1) * c1, cx(0));
        detail::MomentMatrix J(cutoff), Jh(cutoff);
        if (spec.kind == SpecKind::analytic) {
            const auto prof = detail::alpha_profile(spec, 0);
            const double radius = integration_radius(2.0 + prof.decay, 2 * cutoff + prof.extra_power) + prof.shift;
            const double step =
                std::min(0.125, std::numbers::pi / std::sqrt(150.0 * (2.0 + std::max(prof.decay, 0.5))));
            const QuadAxis q = trapezoid_axis(radius, step);
            const QuadAxis qh = detail::strided_quad(q, 2);
            const auto val = [&](std::size_t, std::size_t, cx a) { return cx(evaluate(spec, a)); };
            J = detail::alpha_moments(q, q, cutoff, val);
            Jh = detail::alpha_moments(qh, qh, cutoff, val);
        } else {
            const auto& g = *spec.grid1;
            const double scale = spec.amplitude * spec.value_factor;
            const QuadAxis qx = quad_from_axis(g.xaxis()), qy = quad_from_axis(g.yaxis());
            J = detail::alpha_moments(qx, qy, cutoff,
                                      [&](std::size_t i, std::size_t j, cx) { return cx(scale * g.at(i, j)); });
            Jh = detail::alpha_moments(detail::strided_quad(qx, 2), detail::strided_quad(qy, 2), cutoff,
                                       [&](std::size_t i, std::size_t j, cx) {
                                           return cx(scale * g.at(2 * i, 2 * j));
                                       });
        }
        for (int m = 0; m <= cutoff; ++m)
            for (int n = 0; n <= cutoff; ++n) {
                table.at(m, n) = entry_prefactor(m, n) * J.at(m, n);
                table.quad_error =
                    std::max(table.quad_error, std::abs(entry_prefactor(m, n) * (J.at(m, n) - Jh.at(m, n))));
            }
        table.quad_warning = table.quad_error > 1e-6;
        return table;
    }

    // two modes
    table.data.assign(static_cast<std::size_t>(c1) * c1 * c1 * c1, cx(0));
    const std::size_t mn = static_cast<std::size_t>(c1) * c1;
    std::vector<cx> I(mn * mn, cx(0)), Ih(mn * mn, cx(0));

    if (spec.kind == SpecKind::analytic) {
        for (const auto& term : separable_w_terms(spec)) {
            std::array<detail::MomentMatrix, 2> M{detail::MomentMatrix(cutoff), detail::MomentMatrix(cutoff)};
            std::array<detail::MomentMatrix, 2> Mh{detail::MomentMatrix(cutoff), detail::MomentMatrix(cutoff)};
            for (int mode = 0; mode < 2; ++mode) {
                const auto& f = term.mode[mode];
                const double radius = integration_radius(2.0 + f.decay, 2 * cutoff + f.extra_power) + f.shift;
                const double step =
                    std::min(0.125, std::numbers::pi / std::sqrt(150.0 * (2.0 + std::max(f.decay, 0.5))));
                const QuadAxis q = trapezoid_axis(radius, step);
                const auto val = [&](std::size_t, std::size_t, cx a) { return f.f(a); };
                M[mode] = detail::alpha_moments(q, q, cutoff, val);
                Mh[mode] = detail::alpha_moments(detail::strided_quad(q, 2), detail::strided_quad(q, 2), cutoff, val);
            }
            for (std::size_t u = 0; u < mn; ++u)
                for (std::size_t t = 0; t < mn; ++t) {
                    I[u * mn + t] += term.weight * M[0].v[u] * M[1].v[t];
                    Ih[u * mn + t] += term.weight * Mh[0].v[u] * Mh[1].v[t];
                }
        }
    } else {
        const auto& g = *spec.grid4;
        const double scale = spec.amplitude * spec.value_factor;
        const QuadAxis q0 = quad_from_axis(g.axis(0)), q1 = quad_from_axis(g.axis(1));
        const QuadAxis q2 = quad_from_axis(g.axis(2)), q3 = quad_from_axis(g.axis(3));
        I = detail::contract_two_mode(q0, q1, q2, q3, cutoff, detail::KernelKind::alpha_kernel,
                                      [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
                                          return cx(scale * g.at(static_cast<int>(i), static_cast<int>(j),
                                                                 static_cast<int>(k), static_cast<int>(l)));
                                      });
        Ih = detail::contract_two_mode(detail::strided_quad(q0, 2), detail::strided_quad(q1, 2),
                                       detail::strided_quad(q2, 2), detail::strided_quad(q3, 2), cutoff,
                                       detail::KernelKind::alpha_kernel,
                                       [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
                                           return cx(scale * g.at(static_cast<int>(2 * i), static_cast<int>(2 * j),
                                                                  static_cast<int>(2 * k), static_cast<int>(2 * l)));
                                       });
    }

    for (int m1 = 0; m1 <= cutoff; ++m1)
        for (int n1 = 0; n1 <= cutoff; ++n1)
            for (int m2 = 0; m2 <= cutoff; ++m2)
                for (int n2 = 0; n2 <= cutoff; ++n2) {
                    const std::size_t u = static_cast<std::size_t>(m1) * c1 + n1;
                    const std::size_t t = static_cast<std::size_t>(m2) * c1 + n2;
                    const double pref = entry_prefactor(m1, n1) * entry_prefactor(m2, n2);
                    table.at(m1, n1, m2, n2) = pref * I[u * mn + t];
                    table.quad_error =
                        std::max(table.quad_error, std::abs(pref * (I[u * mn + t] - Ih[u * mn + t])));
                }
    table.quad_warning = table.quad_error > 1e-6;
    return table;
}

// ---------------------------------------------------------------------------

// Coefficients of the partially transposed distribution: mode-2 indices
// swapped, entry (m1,n1,m2,n2) <- original (m1,n1,n2,m2). Involution.
inline CoefficientTable pt_coefficients(const CoefficientTable& table) {
    if (table.modes != 2) throw usage_error("pt_coefficients: two-mode table required");
    CoefficientTable out = table;
    for (int m1 = 0; m1 <= table.cutoff; ++m1)
        for (int n1 = 0; n1 <= table.cutoff; ++n1)
            for (int m2 = 0; m2 <= table.cutoff; ++m2)
                for (int n2 = 0; n2 <= table.cutoff; ++n2) out.at(m1, n1, m2, n2) = table.at(m1, n1, n2, m2);
    return out;
}

// Hilbert-Schmidt norm of the quasi-density operator from the phase-space
// function: ||F||^2 = pi^modes * Int W^2.
inline double hilbert_schmidt_norm(const DistributionSpec& spec) {
    double integral = 0.0;
    if (spec.kind == SpecKind::grid) {
        if (spec.modes == 1) {
            const auto& g = *spec.grid1;
            const QuadAxis qx = quad_from_axis(g.xaxis()), qy = quad_from_axis(g.yaxis());
            const double scale = spec.amplitude * spec.value_factor;
            for (int i = 0; i < g.xaxis().samples; ++i)
                for (int j = 0; j < g.yaxis().samples; ++j) {
                    const double w = scale * g.at(i, j);
                    integral += qx.weight[i] * qy.weight[j] * w * w;
                }
        } else {
            const auto& g = *spec.grid4;
            std::array<QuadAxis, 4> q;
            for (int k = 0; k < 4; ++k) q[k] = quad_from_axis(g.axis(k));
            const double scale = spec.amplitude * spec.value_factor;
            for (int i0 = 0; i0 < g.axis(0).samples; ++i0)
                for (int i1 = 0; i1 < g.axis(1).samples; ++i1)
                    for (int i2 = 0; i2 < g.axis(2).samples; ++i2)
                        for (int i3 = 0; i3 < g.axis(3).samples; ++i3) {
                            const double w = scale * g.at(i0, i1, i2, i3);
                            integral += q[0].weight[i0] * q[1].weight[i1] * q[2].weight[i2] * q[3].weight[i3] * w * w;
                        }
        }
    } else if (spec.modes == 1) {
        const auto prof = detail::alpha_profile(spec, 0);
        const QuadAxis q = detail::alpha_quad_axis(prof, 0);
        for (std::size_t i = 0; i < q.node.size(); ++i)
            for (std::size_t j = 0; j < q.node.size(); ++j) {
                const double w = evaluate(spec, cx(q.node[i], q.node[j]));
                integral += q.weight[i] * q.weight[j] * w * w;
            }
    } else {
        const auto p0 = detail::alpha_profile(spec, 0);
        const auto p1 = detail::alpha_profile(spec, 1);
        const QuadAxis q0 = detail::alpha_quad_axis(p0, 0);
        const QuadAxis q1 = detail::alpha_quad_axis(p1, 0);
        for (std::size_t i = 0; i < q0.node.size(); ++i)
            for (std::size_t j = 0; j < q0.node.size(); ++j)
                for (std::size_t k = 0; k < q1.node.size(); ++k)
                    for (std::size_t l = 0; l < q1.node.size(); ++l) {
                        const double w = evaluate(spec, cx(q0.node[i], q0.node[j]), cx(q1.node[k], q1.node[l]));
                        integral += q0.weight[i] * q0.weight[j] * q1.weight[k] * q1.weight[l] * w * w;
                    }
    }
    const double pid = spec.modes == 1 ? std::numbers::pi : std::numbers::pi * std::numbers::pi;
    return std::sqrt(std::max(0.0, pid * integral));
}

} // namespace wigcheck
