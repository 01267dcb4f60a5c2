#pragma once

// Phase-space model. Coordinates are quadrature amplitudes: a point is
// alpha = alpha_x + i alpha_y with [X, Y] = i/2 and hbar = 1. Canonical
// (x, p) values are these times sqrt(2); the conversion is offered as an
// input convenience only and never used internally.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "wigcheck/grid.hpp"
#include "wigcheck/quadrature.hpp"
#include "wigcheck/special_functions.hpp"

namespace wigcheck {

inline constexpr double kHbar = 1.0;
inline constexpr double kCanonicalScale = 1.4142135623730951; // x = sqrt(2) X

struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct format_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

inline cx canonical_from_quadrature(cx alpha) { return kCanonicalScale * alpha; }
inline cx quadrature_from_canonical(cx xp) { return xp / kCanonicalScale; }

// ---------------------------------------------------------------------------
// Affine per-mode argument map  S(u) = p u + q conj(u) + r.
// Displacements, rotations, axis rescales, and conjugation (partial
// transpose) all live in this class and compose within it.
struct ModeMap {
    cx p{1.0, 0.0};
    cx q{0.0, 0.0};
    cx r{0.0, 0.0};

    cx operator()(cx u) const { return p * u + q * std::conj(u) + r; }

    bool identity() const {
        return p == cx(1.0, 0.0) && q == cx(0.0, 0.0) && r == cx(0.0, 0.0);
    }

    // Real 2x2 determinant of the linear part; negative for
    // orientation-reversing maps such as conjugation.
    double det() const { return std::norm(p) - std::norm(q); }

    // this(other(u)) — `other` acts first.
    ModeMap after(const ModeMap& other) const {
        ModeMap m;
        m.p = p * other.p + q * std::conj(other.q);
        m.q = p * other.q + q * std::conj(other.p);
        m.r = p * other.r + q * std::conj(other.r) + r;
        return m;
    }

    ModeMap inverse() const {
        const double d = det();
        if (std::abs(d) < 1e-14) throw internal_error("ModeMap: singular map");
        ModeMap m;
        m.p = std::conj(p) / d;
        m.q = -q / d;
        m.r = -(std::conj(p) * r - q * std::conj(r)) / d;
        return m;
    }

    // Lower bound factor on |S(u)|/|u| for large u, used for decay tracking.
    double contraction() const { return std::max(std::abs(p) - std::abs(q), 0.05); }
};

// ---------------------------------------------------------------------------

enum class SpecKind { analytic, grid };

enum class Family {
    vacuum,
    coherent,
    fock,
    thermal,
    gaussian,
    manko_fock1,
    two_mode_superposition,
    product,
};

enum class MapKind { displacement, rotation, axis_rescale, partial_transpose };

// A phase-space map request. target_mode = -1 applies to every mode
// (not allowed for partial_transpose, which conjugates one mode only).
struct PhaseMap {
    MapKind kind;
    std::array<cx, 2> beta{cx(0), cx(0)}; // displacement, per mode
    double phi = 0.0;                     // rotation angle
    double lambda_x = 1.0, lambda_y = 1.0; // axis rescale factors
    int target_mode = -1;

    static PhaseMap displacement(cx b0, cx b1 = cx(0)) {
        PhaseMap m{MapKind::displacement};
        m.beta = {b0, b1};
        return m;
    }
    static PhaseMap rotation(double angle, int mode = -1) {
        PhaseMap m{MapKind::rotation};
        m.phi = angle;
        m.target_mode = mode;
        return m;
    }
    static PhaseMap axis_rescale(double lx, double ly, int mode = -1) {
        PhaseMap m{MapKind::axis_rescale};
        m.lambda_x = lx;
        m.lambda_y = ly;
        m.target_mode = mode;
        return m;
    }
    static PhaseMap partial_transpose(int mode = 1) {
        PhaseMap m{MapKind::partial_transpose};
        m.target_mode = mode;
        return m;
    }
};

// ---------------------------------------------------------------------------

// A one- or two-mode phase-space function to be tested: either a named
// analytic family or a sampled uniform grid, with an ordering parameter s
// (0 = Wigner) and an optional stack of composed affine maps.
struct DistributionSpec {
    int modes = 1;
    SpecKind kind = SpecKind::analytic;

    Family family = Family::vacuum;
    std::vector<double> params;
    std::vector<DistributionSpec> factors; // Family::product only

    std::shared_ptr<const Grid2D<double>> grid1;
    std::shared_ptr<const Grid4D<double>> grid4;

    double s_parameter = 0.0;
    double amplitude = 1.0;

    std::array<ModeMap, 2> arg_map{};
    double value_factor = 1.0;

    bool has_maps() const { return !arg_map[0].identity() || !arg_map[1].identity() || value_factor != 1.0; }
};

inline const char* family_name(Family f) {
    switch (f) {
        case Family::vacuum: return "vacuum";
        case Family::coherent: return "coherent";
        case Family::fock: return "fock";
        case Family::thermal: return "thermal";
        case Family::gaussian: return "gaussian";
        case Family::manko_fock1: return "manko_fock1";
        case Family::two_mode_superposition: return "two_mode_superposition";
        case Family::product: return "product";
    }
    return "?";
}

namespace detail {

inline void validate_family(Family f, const std::vector<double>& p, const std::vector<DistributionSpec>& factors) {
    const auto need = [&](std::size_t n) {
        if (p.size() != n)
            throw usage_error(std::string(family_name(f)) + ": expected " + std::to_string(n) + " parameters");
    };
    switch (f) {
        case Family::vacuum: need(0); break;
        case Family::coherent: need(2); break;
        case Family::fock:
            need(1);
            if (p[0] < 0 || p[0] != std::floor(p[0]) || p[0] > 60) throw usage_error("fock: n must be an integer in [0, 60]");
            break;
        case Family::thermal:
            need(1);
            if (p[0] < 0) throw usage_error("thermal: nbar must be nonnegative");
            break;
        case Family::gaussian:
            need(5);
            if (p[0] <= 0 || p[1] <= 0) throw usage_error("gaussian: standard deviations must be positive");
            break;
        case Family::manko_fock1:
            need(1);
            if (p[0] <= 0) throw usage_error("manko_fock1: lambda must be positive");
            break;
        case Family::two_mode_superposition: need(4); break;
        case Family::product:
            if (factors.size() != 2) throw usage_error("product: exactly two factor specs required");
            for (const auto& s : factors)
                if (s.modes != 1 || s.kind != SpecKind::analytic)
                    throw usage_error("product: factors must be single-mode analytic specs");
            break;
    }
}

} // namespace detail

inline DistributionSpec make_family_spec(Family f, std::vector<double> params = {}, double s = 0.0,
                                         std::vector<DistributionSpec> factors = {}) {
    DistributionSpec spec;
    spec.kind = SpecKind::analytic;
    spec.family = f;
    spec.params = std::move(params);
    spec.factors = std::move(factors);
    spec.s_parameter = s;
    spec.modes = (f == Family::two_mode_superposition || f == Family::product) ? 2 : 1;
    detail::validate_family(f, spec.params, spec.factors);
    return spec;
}

inline DistributionSpec make_grid_spec(Grid2D<double> grid, double s = 0.0) {
    if (grid.xaxis().samples < 8 || grid.yaxis().samples < 8)
        throw usage_error("grid: at least 8 samples per axis required");
    if (grid.xaxis().extent <= 0 || grid.yaxis().extent <= 0) throw usage_error("grid: extents must be positive");
    DistributionSpec spec;
    spec.kind = SpecKind::grid;
    spec.modes = 1;
    spec.grid1 = std::make_shared<Grid2D<double>>(std::move(grid));
    spec.s_parameter = s;
    return spec;
}

inline DistributionSpec make_grid_spec(Grid4D<double> grid, double s = 0.0) {
    for (int k = 0; k < 4; ++k) {
        if (grid.axis(k).samples < 8) throw usage_error("grid: at least 8 samples per axis required");
        if (grid.axis(k).extent <= 0) throw usage_error("grid: extents must be positive");
    }
    DistributionSpec spec;
    spec.kind = SpecKind::grid;
    spec.modes = 2;
    spec.grid4 = std::make_shared<Grid4D<double>>(std::move(grid));
    spec.s_parameter = s;
    return spec;
}

// ---------------------------------------------------------------------------
// Separable-term representation of analytic distributions:
//   W(a1, ..) = sum_t w_t * prod_i f_{t,i}(a_i)
// Every analytic family in the catalogue is such a finite sum, which keeps
// two-mode integrals a product of per-mode ones.

struct ModeFn {
    std::function<cx(cx)> f;
    double decay = 2.0;   // Gaussian rate: |f| <~ e^{-decay |a - center|^2}
    double shift = 0.0;   // magnitude of the center offset
    int extra_power = 0;  // polynomial degree in |a| on top of the Gaussian
};

struct SeparableTerm {
    cx weight{1.0, 0.0};
    std::array<ModeFn, 2> mode;
};

namespace detail {

inline ModeFn fn_vacuum() {
    return {[](cx a) { return cx(2.0 / std::numbers::pi * std::exp(-2.0 * std::norm(a))); }, 2.0, 0.0, 0};
}

inline ModeFn fn_coherent(cx gamma) {
    return {[gamma](cx a) { return cx(2.0 / std::numbers::pi * std::exp(-2.0 * std::norm(a - gamma))); }, 2.0,
            std::abs(gamma), 0};
}

inline ModeFn fn_fock(int n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return {[n, sign](cx a) {
                const double x = std::norm(a);
                return cx(2.0 / std::numbers::pi * sign * laguerre(n, 0, 4.0 * x) * std::exp(-2.0 * x));
            },
            2.0, 0.0, 2 * n};
}

inline ModeFn fn_thermal(double nbar) {
    const double w = 2.0 * nbar + 1.0;
    return {[w](cx a) { return cx(2.0 / (std::numbers::pi * w) * std::exp(-2.0 * std::norm(a) / w)); }, 2.0 / w, 0.0,
            0};
}

inline ModeFn fn_gaussian(double sx, double sy, double phi, cx beta) {
    const double c = std::cos(phi), s = std::sin(phi);
    const double norm = 1.0 / (2.0 * std::numbers::pi * sx * sy);
    return {[=](cx a) {
                const cx d = a - beta;
                const double u = d.real() * c + d.imag() * s;
                const double v = -d.real() * s + d.imag() * c;
                return cx(norm * std::exp(-u * u / (2 * sx * sx) - v * v / (2 * sy * sy)));
            },
            1.0 / (2.0 * std::max(sx, sy) * std::max(sx, sy)), std::abs(beta), 0};
}

inline ModeFn fn_manko(double lam) {
    return {[lam](cx a) {
                const double x = std::norm(a) * lam * lam;
                return cx(lam * lam * 2.0 / std::numbers::pi * (4.0 * x - 1.0) * std::exp(-2.0 * x));
            },
            2.0 * lam * lam, 0.0, 2};
}

// Phase-space transform of |0><1| (and conjugate for |1><0|), the cross
// factor of the |00>+|11> superposition.
inline ModeFn fn_cross01(bool conjugate) {
    return {[conjugate](cx a) {
                const cx v = 4.0 / std::numbers::pi * a * std::exp(-2.0 * std::norm(a));
                return conjugate ? std::conj(v) : v;
            },
            2.0, 0.0, 1};
}

inline ModeFn wrap(const ModeFn& base, const ModeMap& map) {
    if (map.identity()) return base;
    ModeFn out;
    auto f = base.f;
    ModeMap m = map;
    out.f = [f, m](cx u) { return f(m(u)); };
    const double k = m.contraction();
    out.decay = base.decay * k * k;
    out.shift = (base.shift + std::abs(m.r)) / k;
    out.extra_power = base.extra_power;
    return out;
}

inline std::vector<SeparableTerm> base_terms(const DistributionSpec& spec);

inline std::vector<SeparableTerm> single_mode_terms(const DistributionSpec& spec) {
    switch (spec.family) {
        case Family::vacuum: return {{cx(1.0), {fn_vacuum(), {}}}};
        case Family::coherent: return {{cx(1.0), {fn_coherent(cx(spec.params[0], spec.params[1])), {}}}};
        case Family::fock: return {{cx(1.0), {fn_fock(static_cast<int>(spec.params[0])), {}}}};
        case Family::thermal: return {{cx(1.0), {fn_thermal(spec.params[0]), {}}}};
        case Family::gaussian:
            return {{cx(1.0),
                     {fn_gaussian(spec.params[0], spec.params[1], spec.params[2], cx(spec.params[3], spec.params[4])),
                      {}}}};
        case Family::manko_fock1: return {{cx(1.0), {fn_manko(spec.params[0]), {}}}};
        default: throw internal_error("single_mode_terms: not a single-mode family");
    }
}

inline std::vector<SeparableTerm> base_terms(const DistributionSpec& spec) {
    if (spec.modes == 1) return single_mode_terms(spec);
    if (spec.family == Family::product) {
        std::vector<SeparableTerm> out;
        for (const auto& t1 : base_terms(spec.factors[0]))
            for (const auto& t2 : base_terms(spec.factors[1]))
                out.push_back({t1.weight * t2.weight * cx(spec.factors[0].amplitude * spec.factors[1].amplitude),
                               {t1.mode[0], t2.mode[0]}});
        return out;
    }
    // |Psi> = A|00> + B|11>
    const cx A(spec.params[0], spec.params[1]);
    const cx B(spec.params[2], spec.params[3]);
    std::vector<SeparableTerm> out;
    out.push_back({cx(std::norm(A)), {fn_vacuum(), fn_vacuum()}});
    out.push_back({cx(std::norm(B)), {fn_fock(1), fn_fock(1)}});
    if (A != cx(0) && B != cx(0)) {
        out.push_back({A * std::conj(B), {fn_cross01(false), fn_cross01(false)}});
        out.push_back({std::conj(A) * B, {fn_cross01(true), fn_cross01(true)}});
    }
    return out;
}

} // namespace detail

// Separable terms of an analytic spec with the map stack and amplitude
// folded in. Grid specs have no such representation.
inline std::vector<SeparableTerm> separable_w_terms(const DistributionSpec& spec) {
    if (spec.kind != SpecKind::analytic) throw usage_error("separable_w_terms: analytic specs only");
    auto terms = detail::base_terms(spec);
    const cx scale(spec.amplitude * spec.value_factor);
    for (auto& t : terms) {
        t.weight *= scale;
        for (int m = 0; m < spec.modes; ++m) t.mode[m] = detail::wrap(t.mode[m], spec.arg_map[m]);
    }
    return terms;
}

// ---------------------------------------------------------------------------
// evaluate: value of the distribution at a phase-space point.

inline double evaluate(const DistributionSpec& spec, cx a1) {
    if (spec.modes != 1) throw usage_error("evaluate: two-mode spec needs two points");
    if (spec.kind == SpecKind::grid) {
        const cx u = spec.arg_map[0](a1);
        if (!spec.grid1->contains(u.real(), u.imag()))
            throw std::domain_error("evaluate: point outside grid extent");
        return spec.amplitude * spec.value_factor * spec.grid1->interp_cubic(u.real(), u.imag());
    }
    cx acc(0);
    for (const auto& t : separable_w_terms(spec)) acc += t.weight * t.mode[0].f(a1);
    return acc.real();
}

inline double evaluate(const DistributionSpec& spec, cx a1, cx a2) {
    if (spec.modes != 2) throw usage_error("evaluate: single-mode spec takes one point");
    if (spec.kind == SpecKind::grid) {
        const cx u1 = spec.arg_map[0](a1);
        const cx u2 = spec.arg_map[1](a2);
        if (!spec.grid4->contains(u1.real(), u1.imag(), u2.real(), u2.imag()))
            throw std::domain_error("evaluate: point outside grid extent");
        return spec.amplitude * spec.value_factor * spec.grid4->interp_cubic(u1.real(), u1.imag(), u2.real(), u2.imag());
    }
    cx acc(0);
    for (const auto& t : separable_w_terms(spec)) acc += t.weight * t.mode[0].f(a1) * t.mode[1].f(a2);
    return acc.real();
}

// ---------------------------------------------------------------------------
// apply_map

namespace detail {

inline ModeMap mode_map_of(const PhaseMap& map, int mode) {
    ModeMap m;
    switch (map.kind) {
        case MapKind::displacement:
            m.r = -map.beta[mode];
            break;
        case MapKind::rotation:
            m.p = std::polar(1.0, -map.phi);
            break;
        case MapKind::axis_rescale:
            m.p = cx((map.lambda_x + map.lambda_y) / 2.0);
            m.q = cx((map.lambda_x - map.lambda_y) / 2.0);
            break;
        case MapKind::partial_transpose:
            m.p = cx(0);
            m.q = cx(1);
            break;
    }
    return m;
}

inline Grid2D<double> resample(const Grid2D<double>& g, const ModeMap& m, double vf) {
    Grid2D<double> out(g.xaxis(), g.yaxis());
    for (int i = 0; i < g.xaxis().samples; ++i)
        for (int j = 0; j < g.yaxis().samples; ++j) {
            const cx u = m(cx(g.xaxis().coord(i), g.yaxis().coord(j)));
            out.at(i, j) = g.contains(u.real(), u.imag()) ? vf * g.interp_cubic(u.real(), u.imag()) : 0.0;
        }
    return out;
}

inline Grid4D<double> resample(const Grid4D<double>& g, const ModeMap& m0, const ModeMap& m1, double vf) {
    Grid4D<double> out({g.axis(0), g.axis(1), g.axis(2), g.axis(3)});
    for (int i0 = 0; i0 < g.axis(0).samples; ++i0)
        for (int i1 = 0; i1 < g.axis(1).samples; ++i1)
            for (int i2 = 0; i2 < g.axis(2).samples; ++i2)
                for (int i3 = 0; i3 < g.axis(3).samples; ++i3) {
                    const cx u1 = m0(cx(g.axis(0).coord(i0), g.axis(1).coord(i1)));
                    const cx u2 = m1(cx(g.axis(2).coord(i2), g.axis(3).coord(i3)));
                    out.at(i0, i1, i2, i3) = g.contains(u1.real(), u1.imag(), u2.real(), u2.imag())
                                                 ? vf * g.interp_cubic(u1.real(), u1.imag(), u2.real(), u2.imag())
                                                 : 0.0;
                }
    return out;
}

// Conjugating one mode maps symmetric grid nodes onto nodes, so the partial
// transpose of a grid is an exact index flip, no interpolation.
inline Grid2D<double> flip_y(const Grid2D<double>& g) {
    Grid2D<double> out(g.xaxis(), g.yaxis());
    const int ny = g.yaxis().samples;
    for (int i = 0; i < g.xaxis().samples; ++i)
        for (int j = 0; j < ny; ++j) out.at(i, j) = g.at(i, ny - 1 - j);
    return out;
}

inline Grid4D<double> flip_mode_y(const Grid4D<double>& g, int mode) {
    Grid4D<double> out({g.axis(0), g.axis(1), g.axis(2), g.axis(3)});
    const int axis = (mode == 0) ? 1 : 3;
    const int n = g.axis(axis).samples;
    for (int i0 = 0; i0 < g.axis(0).samples; ++i0)
        for (int i1 = 0; i1 < g.axis(1).samples; ++i1)
            for (int i2 = 0; i2 < g.axis(2).samples; ++i2)
                for (int i3 = 0; i3 < g.axis(3).samples; ++i3)
                    out.at(i0, i1, i2, i3) = (axis == 1) ? g.at(i0, n - 1 - i1, i2, i3) : g.at(i0, i1, i2, n - 1 - i3);
    return out;
}

} // namespace detail

inline DistributionSpec apply_map(const DistributionSpec& spec, const PhaseMap& map) {
    if (map.kind == MapKind::partial_transpose) {
        if (spec.modes != 2) throw usage_error("apply_map: partial transpose needs a two-mode spec");
        if (map.target_mode != 0 && map.target_mode != 1)
            throw usage_error("apply_map: partial transpose needs a designated mode");
    }
    if (map.target_mode >= spec.modes) throw usage_error("apply_map: target mode out of range");
    if (map.kind == MapKind::axis_rescale && (map.lambda_x <= 0 || map.lambda_y <= 0))
        throw usage_error("apply_map: rescale factors must be positive");

    double vf = 1.0;
    std::array<ModeMap, 2> step{};
    for (int mode = 0; mode < spec.modes; ++mode) {
        const bool hit = map.target_mode < 0 || map.target_mode == mode;
        if (!hit) continue;
        if (map.kind == MapKind::partial_transpose && mode != map.target_mode) continue;
        step[mode] = detail::mode_map_of(map, mode);
        if (map.kind == MapKind::axis_rescale) vf *= map.lambda_x * map.lambda_y;
    }

    DistributionSpec out = spec;
    if (spec.kind == SpecKind::analytic) {
        for (int mode = 0; mode < spec.modes; ++mode) out.arg_map[mode] = spec.arg_map[mode].after(step[mode]);
        out.value_factor = spec.value_factor * vf;
        return out;
    }

    // Grid kind: apply to the stored samples.
    if (map.kind == MapKind::partial_transpose) {
        out.grid4 = std::make_shared<Grid4D<double>>(detail::flip_mode_y(*spec.grid4, map.target_mode));
        return out;
    }
    if (spec.modes == 1)
        out.grid1 = std::make_shared<Grid2D<double>>(detail::resample(*spec.grid1, step[0], vf));
    else
        out.grid4 = std::make_shared<Grid4D<double>>(detail::resample(*spec.grid4, step[0], step[1], vf));
    return out;
}

// ---------------------------------------------------------------------------
// check_normalization

struct NormalizationResult {
    double value = 0.0;
    bool edge_warning = false;
};

namespace detail {

// Decay rate and center offset of the full distribution per mode, for
// choosing integration extents.
struct AlphaProfile {
    double decay = 2.0;
    double shift = 0.0;
    int extra_power = 0;
};

inline AlphaProfile alpha_profile(const DistributionSpec& spec, int mode) {
    AlphaProfile p;
    if (spec.kind == SpecKind::grid) return p;
    bool first = true;
    for (const auto& t : separable_w_terms(spec)) {
        const auto& f = t.mode[mode];
        if (first || f.decay < p.decay) p.decay = f.decay;
        p.shift = std::max(p.shift, f.shift);
        p.extra_power = std::max(p.extra_power, f.extra_power);
        first = false;
    }
    return p;
}

inline QuadAxis alpha_quad_axis(const AlphaProfile& p, int moment_power) {
    const double radius = integration_radius(p.decay, moment_power + p.extra_power) + p.shift;
    const double step = std::min(0.125, std::numbers::pi / std::sqrt(150.0 * std::max(p.decay, 0.5)));
    return trapezoid_axis(radius, step);
}

} // namespace detail

inline NormalizationResult check_normalization(const DistributionSpec& spec) {
    NormalizationResult res;
    if (spec.kind == SpecKind::analytic) {
        const auto terms = separable_w_terms(spec);
        cx total(0);
        for (const auto& t : terms) {
            cx prod = t.weight;
            for (int mode = 0; mode < spec.modes; ++mode) {
                detail::AlphaProfile p{t.mode[mode].decay, t.mode[mode].shift, t.mode[mode].extra_power};
                const QuadAxis q = detail::alpha_quad_axis(p, 0);
                cx integral(0);
                for (std::size_t i = 0; i < q.node.size(); ++i)
                    for (std::size_t j = 0; j < q.node.size(); ++j)
                        integral += q.weight[i] * q.weight[j] * t.mode[mode].f(cx(q.node[i], q.node[j]));
                prod *= integral;
            }
            total += prod;
        }
        res.value = total.real();
        return res;
    }

    const double edge_threshold = 1e-6;
    if (spec.modes == 1) {
        const auto& g = *spec.grid1;
        const QuadAxis qx = quad_from_axis(g.xaxis()), qy = quad_from_axis(g.yaxis());
        double total = 0.0, edge = 0.0;
        for (int i = 0; i < g.xaxis().samples; ++i)
            for (int j = 0; j < g.yaxis().samples; ++j) {
                const double v = g.at(i, j);
                total += qx.weight[i] * qy.weight[j] * v;
                if (i == 0 || j == 0 || i == g.xaxis().samples - 1 || j == g.yaxis().samples - 1)
                    edge = std::max(edge, std::abs(v));
            }
        res.value = spec.amplitude * spec.value_factor * total;
        res.edge_warning = edge > edge_threshold;
        return res;
    }

    const auto& g = *spec.grid4;
    std::array<QuadAxis, 4> q;
    for (int k = 0; k < 4; ++k) q[k] = quad_from_axis(g.axis(k));
    double total = 0.0, edge = 0.0;
    for (int i0 = 0; i0 < g.axis(0).samples; ++i0)
        for (int i1 = 0; i1 < g.axis(1).samples; ++i1)
            for (int i2 = 0; i2 < g.axis(2).samples; ++i2)
                for (int i3 = 0; i3 < g.axis(3).samples; ++i3) {
                    const double v = g.at(i0, i1, i2, i3);
                    total += q[0].weight[i0] * q[1].weight[i1] * q[2].weight[i2] * q[3].weight[i3] * v;
                    if (i0 == 0 || i1 == 0 || i2 == 0 || i3 == 0 || i0 == g.axis(0).samples - 1 ||
                        i1 == g.axis(1).samples - 1 || i2 == g.axis(2).samples - 1 || i3 == g.axis(3).samples - 1)
                        edge = std::max(edge, std::abs(v));
                }
    res.value = spec.amplitude * spec.value_factor * total;
    res.edge_warning = edge > edge_threshold;
    return res;
}

// Sample an analytic spec onto a uniform grid (otherwise-identical spec of
// kind grid). Handy for exercising the grid pipeline against closed forms.
inline DistributionSpec sample_to_grid(const DistributionSpec& spec, double extent, int samples) {
    if (spec.kind != SpecKind::analytic) throw usage_error("sample_to_grid: analytic input required");
    if (spec.modes == 1) {
        Grid2D<double> g({extent, samples}, {extent, samples});
        for (int i = 0; i < samples; ++i)
            for (int j = 0; j < samples; ++j) g.at(i, j) = evaluate(spec, cx(g.xaxis().coord(i), g.yaxis().coord(j)));
        return make_grid_spec(std::move(g), spec.s_parameter);
    }
    Axis ax{extent, samples};
    Grid4D<double> g({ax, ax, ax, ax});
    for (int i0 = 0; i0 < samples; ++i0)
        for (int i1 = 0; i1 < samples; ++i1)
            for (int i2 = 0; i2 < samples; ++i2)
                for (int i3 = 0; i3 < samples; ++i3)
                    g.at(i0, i1, i2, i3) =
                        evaluate(spec, cx(ax.coord(i0), ax.coord(i1)), cx(ax.coord(i2), ax.coord(i3)));
    return make_grid_spec(std::move(g), spec.s_parameter);
}

} // namespace wigcheck
