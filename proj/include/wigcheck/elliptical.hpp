#pragma once

// Elliptical-symmetry fast path. A distribution depending only on the
// elliptical radius sqrt((u/a)^2 + (v/b)^2) (axes rotated by phi, centered
// at beta) is brought to circular standard form by displacing by -beta,
// rotating by -phi and rescaling the axes by (sqrt(a/b), sqrt(b/a)); the
// rescaled mode is again bosonic and the verdict is unitary-invariant, so
// positivity of the output settles the input. Circular distributions have
// C_mn = 0 for m != n, so the quasi-density operator is diagonal with
// eigenvalues alpha_kk = (1/pi) sum_{m<=k} k!/(k-m)! C_mm — O(N) integrals
// instead of an O(N^2) matrix.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "wigcheck/coefficients.hpp"

namespace wigcheck {

struct EllipticalForm {
    cx center{0.0, 0.0};
    double rotation = 0.0;
    double semi_axis_a = 1.0;
    double semi_axis_b = 1.0;
};

// Largest angular variation of W over sampled circles, relative to the
// largest sampled |W|.
inline double circularity_residual(const DistributionSpec& spec, int n_angles = 16, int n_radii = 8) {
    if (spec.modes != 1) throw usage_error("circularity_residual: single-mode specs only");
    double peak = 0.0, variation = 0.0;
    const double max_r =
        spec.kind == SpecKind::grid ? 0.45 * std::min(spec.grid1->xaxis().extent, spec.grid1->yaxis().extent) : 2.0;
    for (int j = 1; j <= n_radii; ++j) {
        const double r = max_r * j / n_radii;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int k = 0; k < n_angles; ++k) {
            const double v = evaluate(spec, std::polar(r, 2.0 * std::numbers::pi * k / n_angles));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            peak = std::max(peak, std::abs(v));
        }
        variation = std::max(variation, hi - lo);
    }
    peak = std::max(peak, std::abs(evaluate(spec, cx(0))));
    return peak > 0 ? variation / peak : 0.0;
}

// Transform a declared elliptical distribution to circular standard form.
// The declaration is verified numerically on the output, not fitted.
inline DistributionSpec normalize_elliptical(const DistributionSpec& spec, const EllipticalForm& declared,
                                             double residual_tolerance = 1e-6) {
    if (spec.modes != 1) throw usage_error("normalize_elliptical: single-mode specs only");
    if (declared.semi_axis_a <= 0 || declared.semi_axis_b <= 0)
        throw usage_error("normalize_elliptical: semi-axes must be positive");

    DistributionSpec out = spec;
    if (declared.center != cx(0)) out = apply_map(out, PhaseMap::displacement(-declared.center));
    if (declared.rotation != 0.0) out = apply_map(out, PhaseMap::rotation(-declared.rotation));
    const double ratio = std::sqrt(declared.semi_axis_a / declared.semi_axis_b);
    if (ratio != 1.0) out = apply_map(out, PhaseMap::axis_rescale(ratio, 1.0 / ratio));

    const double residual = circularity_residual(out);
    if (residual >= residual_tolerance)
        throw usage_error("normalize_elliptical: declared form leaves angular variation " + std::to_string(residual) +
                          " (not circular); check center/rotation/axes");
    return out;
}

// Diagonal spectrum of a circularly symmetric spec: alpha_00..alpha_NN.
inline std::vector<double> diagonal_spectrum(const DistributionSpec& spec, int truncation,
                                             double residual_tolerance = 1e-6) {
    if (spec.modes != 1) throw usage_error("diagonal_spectrum: single-mode specs only");
    if (circularity_residual(spec) >= residual_tolerance)
        throw usage_error("diagonal_spectrum: input is not circularly symmetric; run normalize_elliptical first");

    const int N = truncation;
    std::vector<double> cmm(N + 1, 0.0);

    if (spec.kind == SpecKind::analytic) {
        // diagonal lambda-route: C_mm = ((-1)^m/m!^2) Int |xi|^{2m} e^{-|xi|^2/2} C(xi)
        const CharacteristicFunction cf = characteristic(spec);
        const double radius = integration_radius(0.5 + cf.decay_min(), 2 * N + cf.extra_power_max());
        const QuadAxis q = trapezoid_axis(radius, detail::lambda_step(0.5 + cf.decay_max()));
        for (std::size_t i = 0; i < q.node.size(); ++i)
            for (std::size_t j = 0; j < q.node.size(); ++j) {
                const cx xi(q.node[i], q.node[j]);
                const double u = std::norm(xi);
                const cx base = q.weight[i] * q.weight[j] * std::exp(-0.5 * u) * evaluate_charfn(cf, xi);
                double power = 1.0;
                for (int m = 0; m <= N; ++m) {
                    cmm[m] += (power * base).real();
                    power *= u;
                }
            }
        for (int m = 0; m <= N; ++m) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            cmm[m] *= sign / (factorial(m) * factorial(m));
        }
    } else {
        // angular-averaged radial profile, then the radial alpha-route:
        // C_mm = (2 pi (-2)^m/m!^2) 2 pi Int r S(m,0,2r^2) Wbar(r) dr
        const auto& g = *spec.grid1;
        const double scale = spec.amplitude * spec.value_factor;
        const double rmax = std::min(g.xaxis().extent, g.yaxis().extent);
        const double h = std::min(g.xaxis().step(), g.yaxis().step());
        const int nr = static_cast<int>(std::floor(rmax / h));
        const int n_angles = 64;
        for (int ir = 0; ir <= nr; ++ir) {
            const double r = ir * h;
            double wbar = 0.0;
            if (ir == 0) {
                wbar = scale * g.interp_cubic(0.0, 0.0);
            } else {
                for (int k = 0; k < n_angles; ++k) {
                    const cx p = std::polar(r, 2.0 * std::numbers::pi * k / n_angles);
                    wbar += scale * g.interp_cubic(p.real(), p.imag());
                }
                wbar /= n_angles;
            }
            const double w = (ir == 0 || ir == nr) ? h / 2 : h;
            const double x = 2.0 * r * r;
            const double damp = std::exp(-x);
            // S(m,0,x) = m! e^{-x} L_m(x); accumulate r-integral per m
            double lm1 = 1.0, l = 1.0 - x;
            for (int m = 0; m <= N; ++m) {
                const double lag = (m == 0) ? 1.0 : l;
                cmm[m] += w * r * factorial(m) * damp * lag * wbar;
                if (m >= 1) {
                    const double lp1 = ((2 * m + 1 - x) * l - m * lm1) / (m + 1);
                    lm1 = l;
                    l = lp1;
                }
            }
        }
        for (int m = 0; m <= N; ++m) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            cmm[m] *= 2.0 * std::numbers::pi * std::pow(2.0, m) * sign / (factorial(m) * factorial(m)) * 2.0 *
                      std::numbers::pi;
        }
    }

    std::vector<double> alpha(N + 1, 0.0);
    for (int k = 0; k <= N; ++k) {
        double acc = 0.0;
        for (int m = 0; m <= k; ++m) acc += factorial(k) / factorial(k - m) * cmm[m];
        alpha[k] = acc / std::numbers::pi;
    }
    return alpha;
}

// Closed form for the axis-rescaled Fock |1> family:
//   alpha_kk = (2 l^2/(1+l^2)^3) ((1-l^2)/(1+l^2))^{k-1} [4 k l^2 - (1-l^2)^2],
// with the k = 0 and l = 1 limits taken explicitly (at l = 1 the spectrum
// collapses to delta_{k1}). Reference oracle for the numerical pipeline.
inline double manko_closed_form(double lambda_scale, int k) {
    if (lambda_scale <= 0) throw usage_error("manko_closed_form: lambda must be positive");
    if (k < 0) throw usage_error("manko_closed_form: k must be nonnegative");
    const double l2 = lambda_scale * lambda_scale;
    if (lambda_scale == 1.0) return k == 1 ? 1.0 : 0.0;
    if (k == 0) return -2.0 * l2 * (1.0 - l2) / ((1.0 + l2) * (1.0 + l2));
    const double u = (1.0 - l2) / (1.0 + l2);
    return 2.0 * l2 / std::pow(1.0 + l2, 3) * std::pow(u, k - 1) * (4.0 * k * l2 - (1.0 - l2) * (1.0 - l2));
}

} // namespace wigcheck
