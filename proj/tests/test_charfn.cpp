#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "wigcheck/charfn.hpp"

using namespace wigcheck;
using Catch::Approx;

namespace {
const double pi = std::numbers::pi;

double abs_err(cx a, cx b) { return std::abs(a - b); }
} // namespace

TEST_CASE("vacuum characteristic function is the Gaussian e^{-|xi|^2/2}", "[charfn]") {
    // Oracle: the Gaussian integral Int d^2a e^{xi a* - xi* a} (2/pi) e^{-2|a|^2}
    // evaluates to e^{-|xi|^2/2} under the adopted transform pair.
    const auto cf = characteristic(make_family_spec(Family::vacuum));
    for (cx xi : {cx(0.0), cx(1.0, 0.0), cx(0.4, -1.2), cx(2.0, 2.0)})
        CHECK(abs_err(evaluate_charfn(cf, xi), cx(std::exp(-0.5 * std::norm(xi)))) < 1e-13);
    CHECK(evaluate_charfn(cf, cx(1.0, 0.0)).real() == Approx(0.6065306597).epsilon(1e-9));
}

TEST_CASE("axis-rescaled vacuum has the scaled characteristic function", "[charfn]") {
    const double lam = 1.6;
    const auto scaled = apply_map(make_family_spec(Family::vacuum), PhaseMap::axis_rescale(lam, lam));
    const auto cf = characteristic(scaled);
    for (cx xi : {cx(0.5, 0.0), cx(1.0, -2.0), cx(0.0, 2.5)})
        CHECK(abs_err(evaluate_charfn(cf, xi), cx(std::exp(-0.5 * std::norm(xi / lam)))) < 1e-13);
}

TEST_CASE("rescaled Fock |1>: the closed deformed characteristic function", "[charfn]") {
    const double lam = 0.7;
    const auto cf = characteristic(make_family_spec(Family::manko_fock1, {lam}));
    for (cx xi : {cx(0.0), cx(0.3, 0.6), cx(-1.0, 1.0)}) {
        const double u = std::norm(xi) / (lam * lam);
        CHECK(abs_err(evaluate_charfn(cf, xi), cx((1.0 - u) * std::exp(-0.5 * u))) < 1e-13);
    }
    // and it agrees with mapping fock(1) through the rescale
    const auto mapped = apply_map(make_family_spec(Family::fock, {1}), PhaseMap::axis_rescale(lam, lam));
    const auto cf2 = characteristic(mapped);
    for (cx xi : {cx(0.2, -0.4), cx(1.3, 0.9)})
        CHECK(abs_err(evaluate_charfn(cf, xi), evaluate_charfn(cf2, xi)) < 1e-13);
}

TEST_CASE("C(0) equals the normalization for every family", "[charfn]") {
    for (auto spec : {make_family_spec(Family::vacuum), make_family_spec(Family::coherent, {1.0, 0.5}),
                      make_family_spec(Family::fock, {3}), make_family_spec(Family::thermal, {1.0}),
                      make_family_spec(Family::gaussian, {0.4, 0.7, 0.5, 0.1, -0.2}),
                      make_family_spec(Family::manko_fock1, {0.5})}) {
        const auto cf = characteristic(spec);
        CHECK(abs_err(evaluate_charfn(cf, cx(0)), cx(1.0)) < 1e-10);
    }
    const auto grid = sample_to_grid(make_family_spec(Family::vacuum), 6.0, 256);
    CHECK(abs_err(evaluate_charfn(characteristic(grid), cx(0)), cx(1.0)) < 1e-6);
}

TEST_CASE("grid transform matches closed forms pointwise", "[charfn]") {
    const auto vac = make_family_spec(Family::vacuum);
    const auto cf_grid = characteristic(sample_to_grid(vac, 6.0, 256));
    const auto cf = characteristic(vac);
    // on stored nodes the DFT is accurate to quadrature error; between
    // nodes bilinear interpolation limits the accuracy
    for (cx xi : {cx(0.125, 0.25), cx(1.0, -0.5), cx(2.125, 2.0)})
        CHECK(abs_err(evaluate_charfn(cf_grid, xi), evaluate_charfn(cf, xi)) < 2e-4);
}

TEST_CASE("Hermitian symmetry of grid-backed evaluators", "[charfn]") {
    const auto spec = sample_to_grid(make_family_spec(Family::coherent, {0.8, -0.3}), 6.0, 128);
    const auto cf = characteristic(spec); // construction asserts node symmetry at 1e-12
    for (cx xi : {cx(0.7, 0.3), cx(-1.1, 0.6)})
        CHECK(abs_err(evaluate_charfn(cf, -xi), std::conj(evaluate_charfn(cf, xi))) < 1e-12);
}

TEST_CASE("round trip: inverse transform of the characteristic function returns W", "[charfn]") {
    // W(a) = (1/pi^2) Int d^2xi e^{a xi* - a* xi} C(xi), quadrature on the
    // stored lambda grid of a sampled vacuum
    const auto vac = make_family_spec(Family::vacuum);
    const auto cf = characteristic(sample_to_grid(vac, 6.0, 256));
    const auto& g = *cf.grid1;
    for (cx a : {cx(0.0), cx(0.5, 0.2), cx(-1.0, 0.8)}) {
        cx acc(0);
        const double hx = g.xaxis().step(), hy = g.yaxis().step();
        for (int i = 0; i < g.xaxis().samples; ++i)
            for (int j = 0; j < g.yaxis().samples; ++j) {
                const cx xi(g.xaxis().coord(i), g.yaxis().coord(j));
                acc += std::exp(a * std::conj(xi) - std::conj(a) * xi) * g.at(i, j) * hx * hy;
            }
        acc /= pi * pi;
        CHECK(abs_err(acc, cx(evaluate(vac, a))) < 1e-6);
    }
}

TEST_CASE("s-conversion: the same state given as Q function and as Wigner function", "[charfn]") {
    // The vacuum Q function is (1/pi) e^{-|a|^2}, a circular Gaussian with
    // sigma = 1/sqrt(2); converting it with s = -1 must give the vacuum
    // Wigner characteristic function.
    const double s0 = 1.0 / std::sqrt(2.0);
    auto qspec = make_family_spec(Family::gaussian, {s0, s0, 0.0, 0.0, 0.0}, -1.0);
    const auto cf_q = characteristic(qspec);
    const auto cf_w = characteristic(make_family_spec(Family::vacuum));
    SECTION("closed forms") {
        for (cx xi : {cx(0.3, 0.1), cx(2.0, -1.5), cx(0.0, 5.5)})
            CHECK(abs_err(evaluate_charfn(cf_q, xi), evaluate_charfn(cf_w, xi)) < 1e-12);
    }
    SECTION("grids") {
        const auto cf_qg = characteristic(sample_to_grid(qspec, 8.0, 256));
        const auto cf_wg = characteristic(sample_to_grid(make_family_spec(Family::vacuum), 8.0, 256));
        for (cx xi : {cx(0.3, 0.1), cx(2.0, -1.5), cx(0.0, 5.5)})
            CHECK(abs_err(evaluate_charfn(cf_qg, xi), evaluate_charfn(cf_wg, xi)) < 1e-8);
    }
}

TEST_CASE("s-conversion divergence is reported", "[charfn]") {
    // A function interpreted as a Q function whose transform decays too
    // slowly cannot be converted on any extent.
    auto bad = make_family_spec(Family::vacuum, {}, -1.0); // decay 1/2, conversion strips it all
    CHECK_THROWS_AS(characteristic(bad), conversion_error);
}

TEST_CASE("|C| <= C(0) on legitimate families", "[charfn]") {
    // necessary for legitimacy, asserted only on states known legitimate
    std::mt19937_64 eng(11);
    const auto unit = [&] { return (eng() >> 11) * 0x1.0p-53; };
    for (auto spec : {make_family_spec(Family::vacuum), make_family_spec(Family::coherent, {1.0, 0.5}),
                      make_family_spec(Family::thermal, {0.7}), make_family_spec(Family::fock, {2})}) {
        const auto cf = characteristic(spec);
        const double c0 = evaluate_charfn(cf, cx(0)).real();
        for (int t = 0; t < 200; ++t) {
            const cx xi(6.0 * unit() - 3.0, 6.0 * unit() - 3.0);
            CHECK(std::abs(evaluate_charfn(cf, xi)) <= c0 + 1e-12);
        }
    }
}

TEST_CASE("out-of-extent evaluation returns zero and flags truncation", "[charfn]") {
    const auto cf = characteristic(sample_to_grid(make_family_spec(Family::vacuum), 6.0, 64));
    CHECK_FALSE(cf.truncated());
    const cx far(cf.lambda_extent + 1.0, 0.0);
    CHECK(evaluate_charfn(cf, far) == cx(0));
    CHECK(cf.truncated());
}

TEST_CASE("two-mode characteristic functions", "[charfn]") {
    const double r = 1.0 / std::sqrt(2.0);
    const auto psi = make_family_spec(Family::two_mode_superposition, {r, 0.0, r, 0.0});
    const auto cf = characteristic(psi);
    // C(0,0) = 1; closed form at a sample point:
    // e^{-(|x1|^2+|x2|^2)/2} [ |A|^2 + A B* x1 x2 + c.c. + |B|^2 (1-|x1|^2)(1-|x2|^2) ]
    CHECK(abs_err(evaluate_charfn(cf, cx(0), cx(0)), cx(1.0)) < 1e-13);
    const cx x1(0.4, 0.2), x2(-0.3, 0.5);
    const double g = std::exp(-0.5 * (std::norm(x1) + std::norm(x2)));
    const cx expected =
        g * (0.5 + 0.5 * x1 * x2 + 0.5 * std::conj(x1) * std::conj(x2) +
             0.5 * (1 - std::norm(x1)) * (1 - std::norm(x2)));
    CHECK(abs_err(evaluate_charfn(cf, x1, x2), expected) < 1e-13);

    // product state: factorized closed form
    const auto prod = make_family_spec(Family::product, {}, 0.0,
                                       {make_family_spec(Family::thermal, {0.5}),
                                        make_family_spec(Family::coherent, {1.0, 0.0})});
    const auto cfp = characteristic(prod);
    const cx expect_p = std::exp(cx(-1.0 * std::norm(x1))) *
                        std::exp(cx(-0.5 * std::norm(x2)) + x2 * cx(1.0) - std::conj(x2) * cx(1.0));
    CHECK(abs_err(evaluate_charfn(cfp, x1, x2), expect_p) < 1e-13);
}

TEST_CASE("two-mode grid transform agrees with the closed form on nodes", "[charfn]") {
    const double r = 1.0 / std::sqrt(2.0);
    const auto psi = make_family_spec(Family::two_mode_superposition, {r, 0.0, r, 0.0});
    const auto cf = characteristic(psi);
    const auto cfg = characteristic(sample_to_grid(psi, 5.0, 33));
    const auto& g = *cfg.grid4;
    // interior nodes: near the Nyquist-limited corners of a coarse source
    // grid the transform picks up O(1e-6) aliasing
    double worst = 0.0;
    for (int i0 = 0; i0 < g.axis(0).samples; i0 += 5)
        for (int i1 = 0; i1 < g.axis(1).samples; i1 += 5)
            for (int i2 = 0; i2 < g.axis(2).samples; i2 += 5)
                for (int i3 = 0; i3 < g.axis(3).samples; i3 += 5) {
                    const cx x1(g.axis(0).coord(i0), g.axis(1).coord(i1));
                    const cx x2(g.axis(2).coord(i2), g.axis(3).coord(i3));
                    if (std::max({std::abs(x1.real()), std::abs(x1.imag()), std::abs(x2.real()),
                                  std::abs(x2.imag())}) > 3.5)
                        continue;
                    worst = std::max(worst, abs_err(g.at(i0, i1, i2, i3), evaluate_charfn(cf, x1, x2)));
                }
    CHECK(worst < 1e-9);
}
