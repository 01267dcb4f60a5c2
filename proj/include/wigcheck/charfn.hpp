#pragma once

// Characteristic functions: C_t(xi) = Int d^2a e^{xi a* - xi* a} W_t(a)
// per mode, with s-parametrized inputs converted eagerly through the factor
// e^{-(s/2)|xi|^2} so everything downstream sees the Wigner-equivalent
// (s = 0) characteristic function. The inverse pair used throughout is
// W(a) = (1/pi^2) Int d^2xi e^{a xi* - a* xi} C(xi), which makes
// C(0) = Int W = Tr rho_q exactly.

#include <atomic>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "wigcheck/phase_space.hpp"

namespace wigcheck {

struct conversion_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One separable factor of a closed-form characteristic function.
struct CharFactor {
    std::function<cx(cx)> f;
    double decay = 0.5;  // |f| <~ e^{-decay |xi|^2}
    int extra_power = 0; // polynomial degree in |xi| on top of the Gaussian
};

struct CharTerm {
    cx weight{1.0, 0.0};
    std::array<CharFactor, 2> mode;
};

class CharacteristicFunction {
public:
    enum class Backend { closed_form, lambda_grid };

    int modes = 1;
    Backend backend = Backend::closed_form;
    double origin_s = 0.0;

    std::vector<CharTerm> terms;             // closed_form
    std::shared_ptr<const Grid2D<cx>> grid1; // lambda_grid, one mode
    std::shared_ptr<const Grid4D<cx>> grid4; // lambda_grid, two modes

    double lambda_extent = std::numeric_limits<double>::infinity();

    bool closed_form() const { return backend == Backend::closed_form; }

    double decay_min() const {
        if (!closed_form()) return grid_decay_;
        double c = std::numeric_limits<double>::infinity();
        for (const auto& t : terms)
            for (int m = 0; m < modes; ++m) c = std::min(c, t.mode[m].decay);
        return std::isfinite(c) ? c : 0.5;
    }
    double decay_max() const {
        if (!closed_form()) return std::max(grid_decay_, 0.5);
        double c = 0.5;
        for (const auto& t : terms)
            for (int m = 0; m < modes; ++m) c = std::max(c, t.mode[m].decay);
        return c;
    }
    int extra_power_max() const {
        int p = 0;
        for (const auto& t : terms)
            for (int m = 0; m < modes; ++m) p = std::max(p, t.mode[m].extra_power);
        return p;
    }

    bool truncated() const { return trunc_ && trunc_->load(); }
    void flag_truncation() const {
        if (trunc_) trunc_->store(true);
    }

    double grid_decay_ = 0.5; // fitted modulus decay for grid backends
    std::shared_ptr<std::atomic<bool>> trunc_ = std::make_shared<std::atomic<bool>>(false);
};

// ---------------------------------------------------------------------------
// Closed-form factors per family (base, before maps and s-conversion).

namespace detail {

inline CharFactor cf_gauss(double rate) { // e^{-rate |xi|^2}
    return {[rate](cx xi) { return cx(std::exp(-rate * std::norm(xi))); }, rate, 0};
}

inline CharFactor cf_vacuum() { return cf_gauss(0.5); }

inline CharFactor cf_coherent(cx gamma) {
    return {[gamma](cx xi) {
                return std::exp(cx(-0.5 * std::norm(xi)) + xi * std::conj(gamma) - std::conj(xi) * gamma);
            },
            0.5, 0};
}

inline CharFactor cf_fock(int n) {
    return {[n](cx xi) {
                const double x = std::norm(xi);
                return cx(laguerre(n, 0, x) * std::exp(-0.5 * x));
            },
            0.5, 2 * n};
}

inline CharFactor cf_thermal(double nbar) { return cf_gauss((2.0 * nbar + 1.0) / 2.0); }

inline CharFactor cf_gaussian(double sx, double sy, double phi, cx beta) {
    const cx rot = std::polar(1.0, -phi);
    return {[=](cx xi) {
                const cx phase = std::exp(xi * std::conj(beta) - std::conj(xi) * beta);
                const cx mu = rot * xi;
                return phase *
                       std::exp(-2.0 * sx * sx * mu.imag() * mu.imag() - 2.0 * sy * sy * mu.real() * mu.real());
            },
            2.0 * std::min(sx, sy) * std::min(sx, sy), 0};
}

inline CharFactor cf_manko(double lam) {
    const double inv2 = 1.0 / (lam * lam);
    return {[inv2](cx xi) {
                const double u = std::norm(xi) * inv2;
                return cx((1.0 - u) * std::exp(-0.5 * u));
            },
            0.5 * inv2, 2};
}

// <1|D(xi)|0> = xi e^{-|xi|^2/2}; conjugate partner <0|D(xi)|1> = -xi* e^{-|xi|^2/2}.
inline CharFactor cf_raise(bool conjugate) {
    return {[conjugate](cx xi) {
                const cx v = xi * std::exp(cx(-0.5 * std::norm(xi)));
                return conjugate ? -std::conj(v) : v;
            },
            0.5, 1};
}

inline std::vector<CharTerm> base_char_terms(const DistributionSpec& spec) {
    if (spec.modes == 1) {
        CharFactor f;
        switch (spec.family) {
            case Family::vacuum: f = cf_vacuum(); break;
            case Family::coherent: f = cf_coherent(cx(spec.params[0], spec.params[1])); break;
            case Family::fock: f = cf_fock(static_cast<int>(spec.params[0])); break;
            case Family::thermal: f = cf_thermal(spec.params[0]); break;
            case Family::gaussian:
                f = cf_gaussian(spec.params[0], spec.params[1], spec.params[2], cx(spec.params[3], spec.params[4]));
                break;
            case Family::manko_fock1: f = cf_manko(spec.params[0]); break;
            default: throw internal_error("base_char_terms: unexpected family");
        }
        return {{cx(1.0), {f, {}}}};
    }
    if (spec.family == Family::product) {
        std::vector<CharTerm> out;
        for (const auto& t1 : base_char_terms(spec.factors[0]))
            for (const auto& t2 : base_char_terms(spec.factors[1]))
                out.push_back({t1.weight * t2.weight * cx(spec.factors[0].amplitude * spec.factors[1].amplitude),
                               {t1.mode[0], t2.mode[0]}});
        return out;
    }
    // |Psi> = A|00> + B|11>, assembled from displacement matrix elements.
    const cx A(spec.params[0], spec.params[1]);
    const cx B(spec.params[2], spec.params[3]);
    std::vector<CharTerm> out;
    out.push_back({cx(std::norm(A)), {cf_vacuum(), cf_vacuum()}});
    out.push_back({cx(std::norm(B)), {cf_fock(1), cf_fock(1)}});
    if (A != cx(0) && B != cx(0)) {
        out.push_back({A * std::conj(B), {cf_raise(false), cf_raise(false)}});
        out.push_back({std::conj(A) * B, {cf_raise(true), cf_raise(true)}});
    }
    return out;
}

// Transform of the characteristic function under the spec's argument map,
// derived from the substitution u = S(a) in the defining integral:
//   C'(xi) = (v/|det S|) e^{xi R* - xi* R} C(P* xi - Q xi*)
// with (P, Q, R) the inverse map.
inline CharFactor cf_wrap(const CharFactor& base, const ModeMap& arg_map) {
    if (arg_map.identity()) return base;
    const ModeMap inv = arg_map.inverse();
    CharFactor out;
    auto f = base.f;
    const cx P = inv.p, Q = inv.q, R = inv.r;
    out.f = [f, P, Q, R](cx xi) {
        const cx phase = std::exp(xi * std::conj(R) - std::conj(xi) * R);
        return phase * f(std::conj(P) * xi - Q * std::conj(xi));
    };
    const double k = std::max(std::abs(P) - std::abs(Q), 0.05);
    out.decay = base.decay * k * k;
    out.extra_power = base.extra_power;
    return out;
}

inline CharFactor cf_s_convert(const CharFactor& base, double s) {
    if (s == 0.0) return base;
    CharFactor out;
    auto f = base.f;
    out.f = [f, s](cx xi) { return f(xi) * std::exp(-0.5 * s * std::norm(xi)); };
    out.decay = base.decay + 0.5 * s;
    out.extra_power = base.extra_power;
    if (out.decay <= 0.02) throw conversion_error("characteristic: s-conversion diverges for this input");
    return out;
}

// --- discrete symplectic Fourier transforms -------------------------------
// e^{xi a* - xi* a} = e^{2i(xi_y a_x - xi_x a_y)}: the xi_x axis is built
// from the source y axis (sign -), the xi_y axis from the source x axis (+).

inline std::vector<cx> dft_kernel(const QuadAxis& src, const Axis& freq, double sign) {
    std::vector<cx> K(static_cast<std::size_t>(freq.samples) * src.node.size());
    for (int k = 0; k < freq.samples; ++k) {
        const double xk = freq.coord(k);
        for (std::size_t i = 0; i < src.node.size(); ++i)
            K[k * src.node.size() + i] = src.weight[i] * std::exp(cx(0, sign * 2.0 * xk * src.node[i]));
    }
    return K;
}

inline Axis lambda_axis_for(const Axis& source_axis, double max_extent, double step) {
    const double nyquist = std::numbers::pi / (2.0 * source_axis.step());
    const double extent_raw = std::min(max_extent, 0.95 * nyquist);
    const int half = std::max(8, static_cast<int>(std::floor(extent_raw / step)));
    return Axis{half * step, 2 * half + 1};
}

inline Grid2D<cx> sft_grid1(const Grid2D<double>& g, double scale, double max_extent = 16.0, double step = 0.125) {
    const QuadAxis qx = quad_from_axis(g.xaxis());
    const QuadAxis qy = quad_from_axis(g.yaxis());
    const Axis fx = lambda_axis_for(g.yaxis(), max_extent, step); // xi_x from source y
    const Axis fy = lambda_axis_for(g.xaxis(), max_extent, step); // xi_y from source x
    const auto Kx = dft_kernel(qy, fx, -1.0);
    const auto Ky = dft_kernel(qx, fy, +1.0);

    const int nx = g.xaxis().samples, ny = g.yaxis().samples;
    std::vector<cx> mid(static_cast<std::size_t>(nx) * fx.samples);
    for (int i = 0; i < nx; ++i)
        for (int k = 0; k < fx.samples; ++k) {
            cx acc(0);
            for (int j = 0; j < ny; ++j) acc += Kx[static_cast<std::size_t>(k) * ny + j] * g.at(i, j);
            mid[static_cast<std::size_t>(i) * fx.samples + k] = acc;
        }
    Grid2D<cx> out(fx, fy);
    for (int k = 0; k < fx.samples; ++k)
        for (int l = 0; l < fy.samples; ++l) {
            cx acc(0);
            for (int i = 0; i < nx; ++i)
                acc += Ky[static_cast<std::size_t>(l) * nx + i] * mid[static_cast<std::size_t>(i) * fx.samples + k];
            out.at(k, l) = scale * acc;
        }
    return out;
}

inline Grid4D<cx> sft_grid4(const Grid4D<double>& g, double scale, double max_extent = 8.0, double step = 0.5) {
    // source axes (x1, y1, x2, y2); contracting axis a replaces it with the
    // matching frequency axis in place, giving order (xi1_y, xi1_x, xi2_y,
    // xi2_x); a final permutation restores (xi1_x, xi1_y, xi2_x, xi2_y).
    const std::array<Axis, 4> in{g.axis(0), g.axis(1), g.axis(2), g.axis(3)};
    std::array<Axis, 4> freq_inplace;
    freq_inplace[0] = lambda_axis_for(in[0], max_extent, step); // xi1_y
    freq_inplace[1] = lambda_axis_for(in[1], max_extent, step); // xi1_x
    freq_inplace[2] = lambda_axis_for(in[2], max_extent, step); // xi2_y
    freq_inplace[3] = lambda_axis_for(in[3], max_extent, step); // xi2_x
    const double sign[4] = {+1.0, -1.0, +1.0, -1.0};

    std::array<int, 4> dim{in[0].samples, in[1].samples, in[2].samples, in[3].samples};
    std::vector<cx> cur(g.values().begin(), g.values().end());

    const auto idx = [](const std::array<int, 4>& d, int a, int b, int c, int e) {
        return ((static_cast<std::size_t>(a) * d[1] + b) * d[2] + c) * d[3] + e;
    };

    for (int axis = 0; axis < 4; ++axis) {
        const QuadAxis q = quad_from_axis(in[axis]);
        const auto K = dft_kernel(q, freq_inplace[axis], sign[axis]);
        std::array<int, 4> nd = dim;
        nd[axis] = freq_inplace[axis].samples;
        std::vector<cx> next(static_cast<std::size_t>(nd[0]) * nd[1] * nd[2] * nd[3]);
        std::array<int, 4> it{};
        for (it[0] = 0; it[0] < nd[0]; ++it[0])
            for (it[1] = 0; it[1] < nd[1]; ++it[1])
                for (it[2] = 0; it[2] < nd[2]; ++it[2])
                    for (it[3] = 0; it[3] < nd[3]; ++it[3]) {
                        cx acc(0);
                        std::array<int, 4> jt = it;
                        for (int j = 0; j < dim[axis]; ++j) {
                            jt[axis] = j;
                            acc += K[static_cast<std::size_t>(it[axis]) * dim[axis] + j] *
                                   cur[idx(dim, jt[0], jt[1], jt[2], jt[3])];
                        }
                        next[idx(nd, it[0], it[1], it[2], it[3])] = acc;
                    }
        cur = std::move(next);
        dim = nd;
    }

    Grid4D<cx> out({freq_inplace[1], freq_inplace[0], freq_inplace[3], freq_inplace[2]});
    for (int a = 0; a < dim[0]; ++a)
        for (int b = 0; b < dim[1]; ++b)
            for (int c = 0; c < dim[2]; ++c)
                for (int e = 0; e < dim[3]; ++e)
                    out.at(b, a, e, c) = scale * cur[idx(dim, a, b, c, e)];
    return out;
}

inline double fit_grid_decay(const Grid2D<cx>& g) {
    // modulus decay estimate used only to pick integration extents
    double best = 8.0;
    const Axis& ax = g.xaxis();
    const Axis& ay = g.yaxis();
    const int i0 = ax.samples / 2, j0 = ay.samples / 2;
    const double c0 = std::abs(g.at(i0, j0));
    if (c0 <= 0) return 0.5;
    for (int step = 1; step <= std::min(i0, j0); ++step) {
        const double r2 = ax.coord(i0 + step) * ax.coord(i0 + step);
        if (r2 < 1.0) continue;
        const double v = std::max({std::abs(g.at(i0 + step, j0)), std::abs(g.at(i0 - step, j0)),
                                   std::abs(g.at(i0, j0 + step)), std::abs(g.at(i0, j0 - step))});
        if (v < 1e-140 * c0) break;
        best = std::min(best, -std::log(std::max(v / c0, 1e-140)) / r2);
    }
    return std::max(best, 0.05);
}

inline void check_hermitian_grid(const Grid2D<cx>& g) {
    const int nx = g.xaxis().samples, ny = g.yaxis().samples;
    double peak = 0.0, res = 0.0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) peak = std::max(peak, std::abs(g.at(i, j)));
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            res = std::max(res, std::abs(g.at(i, j) - std::conj(g.at(nx - 1 - i, ny - 1 - j))));
    if (res > 1e-12 * std::max(peak, 1.0))
        throw internal_error("characteristic: grid transform violates Hermitian symmetry");
}

} // namespace detail

// ---------------------------------------------------------------------------

// Build the (Wigner-equivalent) characteristic function of a spec.
inline CharacteristicFunction characteristic(const DistributionSpec& spec) {
    CharacteristicFunction cf;
    cf.modes = spec.modes;
    cf.origin_s = spec.s_parameter;

    if (spec.kind == SpecKind::analytic) {
        cf.backend = CharacteristicFunction::Backend::closed_form;
        cf.terms = detail::base_char_terms(spec);
        double det_scale = 1.0;
        for (int m = 0; m < spec.modes; ++m) det_scale *= std::abs(spec.arg_map[m].det());
        const cx weight_scale(spec.amplitude * spec.value_factor / det_scale);
        for (auto& t : cf.terms) {
            t.weight *= weight_scale;
            for (int m = 0; m < spec.modes; ++m) {
                t.mode[m] = detail::cf_wrap(t.mode[m], spec.arg_map[m]);
                t.mode[m] = detail::cf_s_convert(t.mode[m], spec.s_parameter);
            }
        }
        return cf;
    }

    cf.backend = CharacteristicFunction::Backend::lambda_grid;
    const double scale = spec.amplitude * spec.value_factor;
    if (spec.modes == 1) {
        auto g = detail::sft_grid1(*spec.grid1, scale);
        if (spec.s_parameter != 0.0) {
            double peak = 0.0;
            for (int i = 0; i < g.xaxis().samples; ++i)
                for (int j = 0; j < g.yaxis().samples; ++j) {
                    cx& v = g.at(i, j);
                    v *= std::exp(-0.5 * spec.s_parameter *
                                  (std::norm(cx(g.xaxis().coord(i), g.yaxis().coord(j)))));
                    peak = std::max(peak, std::abs(v));
                }
            if (!std::isfinite(peak) || peak > 1e250)
                throw conversion_error("characteristic: s-conversion overflows on the sampled extent");
        }
        detail::check_hermitian_grid(g);
        cf.lambda_extent = std::min(g.xaxis().extent, g.yaxis().extent);
        cf.grid_decay_ = detail::fit_grid_decay(g);
        cf.grid1 = std::make_shared<Grid2D<cx>>(std::move(g));
        return cf;
    }

    auto g = detail::sft_grid4(*spec.grid4, scale);
    if (spec.s_parameter != 0.0) {
        double peak = 0.0;
        for (int i0 = 0; i0 < g.axis(0).samples; ++i0)
            for (int i1 = 0; i1 < g.axis(1).samples; ++i1)
                for (int i2 = 0; i2 < g.axis(2).samples; ++i2)
                    for (int i3 = 0; i3 < g.axis(3).samples; ++i3) {
                        cx& v = g.at(i0, i1, i2, i3);
                        const double n2 = std::norm(cx(g.axis(0).coord(i0), g.axis(1).coord(i1))) +
                                          std::norm(cx(g.axis(2).coord(i2), g.axis(3).coord(i3)));
                        v *= std::exp(-0.5 * spec.s_parameter * n2);
                        peak = std::max(peak, std::abs(v));
                    }
        if (!std::isfinite(peak) || peak > 1e250)
            throw conversion_error("characteristic: s-conversion overflows on the sampled extent");
    }
    cf.lambda_extent = g.axis(0).extent;
    for (int k = 1; k < 4; ++k) cf.lambda_extent = std::min(cf.lambda_extent, g.axis(k).extent);
    cf.grid_decay_ = 0.5;
    cf.grid4 = std::make_shared<Grid4D<cx>>(std::move(g));
    return cf;
}

// Point evaluation. Grid-backed evaluators interpolate bilinearly on real
// and imaginary parts; points beyond the stored extent return 0 and flag
// the truncation (all downstream integrals are Gaussian-damped there).
inline cx evaluate_charfn(const CharacteristicFunction& cf, cx xi) {
    if (cf.modes != 1) throw usage_error("evaluate_charfn: two-mode evaluator needs two arguments");
    if (cf.closed_form()) {
        cx acc(0);
        for (const auto& t : cf.terms) acc += t.weight * t.mode[0].f(xi);
        return acc;
    }
    if (!cf.grid1->contains(xi.real(), xi.imag())) {
        cf.flag_truncation();
        return cx(0);
    }
    return cf.grid1->interp_linear(xi.real(), xi.imag());
}

inline cx evaluate_charfn(const CharacteristicFunction& cf, cx xi1, cx xi2) {
    if (cf.modes != 2) throw usage_error("evaluate_charfn: single-mode evaluator takes one argument");
    if (cf.closed_form()) {
        cx acc(0);
        for (const auto& t : cf.terms) acc += t.weight * t.mode[0].f(xi1) * t.mode[1].f(xi2);
        return acc;
    }
    if (!cf.grid4->contains(xi1.real(), xi1.imag(), xi2.real(), xi2.imag())) {
        cf.flag_truncation();
        return cx(0);
    }
    return cf.grid4->interp_linear(xi1.real(), xi1.imag(), xi2.real(), xi2.imag());
}

} // namespace wigcheck
